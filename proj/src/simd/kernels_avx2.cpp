// Compiled with -mavx2 -mfma; only called after avx2_available() succeeds.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "regulink/simd/kernels.hpp"

namespace regulink::simd::avx2 {

namespace {

struct V3 {
  __m256d x, y, z;
};

inline V3 sub(const V3& a, const V3& b) {
  return {_mm256_sub_pd(a.x, b.x), _mm256_sub_pd(a.y, b.y), _mm256_sub_pd(a.z, b.z)};
}

inline __m256d dot(const V3& a, const V3& b) {
  return _mm256_fmadd_pd(a.x, b.x, _mm256_fmadd_pd(a.y, b.y, _mm256_mul_pd(a.z, b.z)));
}

inline V3 cross(const V3& a, const V3& b) {
  return {_mm256_fmsub_pd(a.y, b.z, _mm256_mul_pd(a.z, b.y)),
          _mm256_fmsub_pd(a.z, b.x, _mm256_mul_pd(a.x, b.z)),
          _mm256_fmsub_pd(a.x, b.y, _mm256_mul_pd(a.y, b.x))};
}

inline V3 broadcast(double x, double y, double z) {
  return {_mm256_set1_pd(x), _mm256_set1_pd(y), _mm256_set1_pd(z)};
}

// Cephes-style arctangent on [0, 1].
inline __m256d atan_unit(__m256d t) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d reduce = _mm256_cmp_pd(t, _mm256_set1_pd(0.66), _CMP_GT_OQ);
  const __m256d x =
      _mm256_blendv_pd(t, _mm256_div_pd(_mm256_sub_pd(t, one), _mm256_add_pd(t, one)), reduce);
  const __m256d base = _mm256_blendv_pd(zero, _mm256_set1_pd(0.78539816339744830962), reduce);
  const __m256d extra = _mm256_blendv_pd(zero, _mm256_set1_pd(0.5 * 6.123233995736765886130e-17),
                                         reduce);
  const __m256d z = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(-8.750608600031904122785e-1);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.615753718733365076637e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-7.500855792314704667340e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.228866684490136173410e2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-6.485021904942025371773e1));
  __m256d q = _mm256_add_pd(z, _mm256_set1_pd(2.485846490142306297962e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.650270098316988542046e2));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.328810604912902668951e2));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.853903996359136964868e2));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.945506571482613964425e2));
  const __m256d r = _mm256_fmadd_pd(_mm256_mul_pd(x, z), _mm256_div_pd(p, q), x);
  return _mm256_add_pd(base, _mm256_add_pd(r, extra));
}

inline __m256d atan2_pd(__m256d y, __m256d x) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ax = _mm256_andnot_pd(sign_mask, x);
  const __m256d ay = _mm256_andnot_pd(sign_mask, y);
  const __m256d hi = _mm256_max_pd(ax, ay);
  const __m256d lo = _mm256_min_pd(ax, ay);
  const __m256d hi_zero = _mm256_cmp_pd(hi, zero, _CMP_EQ_OQ);
  const __m256d t = _mm256_blendv_pd(_mm256_div_pd(lo, hi), zero, hi_zero);
  __m256d a = atan_unit(t);
  const __m256d swapped = _mm256_cmp_pd(ay, ax, _CMP_GT_OQ);
  a = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(1.57079632679489661923), a), swapped);
  const __m256d x_negative = _mm256_cmp_pd(x, zero, _CMP_LT_OQ);
  a = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(3.14159265358979323846), a), x_negative);
  return _mm256_or_pd(a, _mm256_and_pd(sign_mask, y));
}

inline __m256d norm(const V3& v) { return _mm256_sqrt_pd(dot(v, v)); }

// 2 atan2(p.(q x r), |p||q||r| + (p.q)|r| + (p.r)|q| + (q.r)|p|)
inline __m256d triangle(const V3& p, const V3& q, const V3& r, __m256d np, __m256d nq,
                        __m256d nr) {
  const __m256d numerator = dot(p, cross(q, r));
  __m256d denominator = _mm256_mul_pd(_mm256_mul_pd(np, nq), nr);
  denominator = _mm256_fmadd_pd(dot(p, q), nr, denominator);
  denominator = _mm256_fmadd_pd(dot(p, r), nq, denominator);
  denominator = _mm256_fmadd_pd(dot(q, r), np, denominator);
  return _mm256_mul_pd(_mm256_set1_pd(2.0), atan2_pd(numerator, denominator));
}

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

// Copies a closed polyline coordinate into an array padded to a multiple of
// four segments; entry k + 1 is the far end of segment k.
std::vector<double> closed_padded(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t padded = (n + 3) / 4 * 4;
  std::vector<double> out(padded + 1, v[0]);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

double gauss_pair_sum(const Points3& loop_a, const Points3& loop_b) {
  const std::size_t na = loop_a.size();
  const std::size_t nb = loop_b.size();
  const auto bx = closed_padded(loop_b.x);
  const auto by = closed_padded(loop_b.y);
  const auto bz = closed_padded(loop_b.z);
  const std::size_t blocks = (nb + 3) / 4;

  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    const std::size_t i1 = (i + 1) % na;
    const V3 a = broadcast(loop_a.x[i], loop_a.y[i], loop_a.z[i]);
    const V3 b = broadcast(loop_a.x[i1], loop_a.y[i1], loop_a.z[i1]);
    __m256d row = _mm256_setzero_pd();
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      const std::size_t j = blk * 4;
      const V3 c{_mm256_loadu_pd(&bx[j]), _mm256_loadu_pd(&by[j]), _mm256_loadu_pd(&bz[j])};
      const V3 d{_mm256_loadu_pd(&bx[j + 1]), _mm256_loadu_pd(&by[j + 1]),
                 _mm256_loadu_pd(&bz[j + 1])};
      const V3 v0 = sub(a, c);
      const V3 v1 = sub(b, c);
      const V3 v2 = sub(b, d);
      const V3 v3 = sub(a, d);
      const __m256d n0 = norm(v0);
      const __m256d n1 = norm(v1);
      const __m256d n2 = norm(v2);
      const __m256d n3 = norm(v3);
      __m256d omega = _mm256_add_pd(triangle(v0, v1, v2, n0, n1, n2),
                                    triangle(v0, v2, v3, n0, n2, n3));
      if (j + 4 > nb) {
        alignas(32) double keep[4];
        for (std::size_t lane = 0; lane < 4; ++lane) {
          keep[lane] = j + lane < nb ? 1.0 : 0.0;
        }
        omega = _mm256_mul_pd(omega, _mm256_load_pd(keep));
      }
      row = _mm256_sub_pd(row, omega);
    }
    total += horizontal_sum(row);
  }
  return total;
}

double min_point_segment_distance(const Points4& points, const Points4& loop) {
  const std::size_t n = loop.size();
  const auto lw = closed_padded(loop.w);
  const auto lx = closed_padded(loop.x);
  const auto ly = closed_padded(loop.y);
  const auto lz = closed_padded(loop.z);
  const std::size_t blocks = (n + 3) / 4;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const __m256d pw = _mm256_set1_pd(points.w[i]);
    const __m256d px = _mm256_set1_pd(points.x[i]);
    const __m256d py = _mm256_set1_pd(points.y[i]);
    const __m256d pz = _mm256_set1_pd(points.z[i]);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      const std::size_t k = blk * 4;
      const __m256d aw = _mm256_loadu_pd(&lw[k]);
      const __m256d ax = _mm256_loadu_pd(&lx[k]);
      const __m256d ay = _mm256_loadu_pd(&ly[k]);
      const __m256d az = _mm256_loadu_pd(&lz[k]);
      const __m256d ew = _mm256_sub_pd(_mm256_loadu_pd(&lw[k + 1]), aw);
      const __m256d ex = _mm256_sub_pd(_mm256_loadu_pd(&lx[k + 1]), ax);
      const __m256d ey = _mm256_sub_pd(_mm256_loadu_pd(&ly[k + 1]), ay);
      const __m256d ez = _mm256_sub_pd(_mm256_loadu_pd(&lz[k + 1]), az);
      const __m256d rw = _mm256_sub_pd(pw, aw);
      const __m256d rx = _mm256_sub_pd(px, ax);
      const __m256d ry = _mm256_sub_pd(py, ay);
      const __m256d rz = _mm256_sub_pd(pz, az);
      const __m256d ee = _mm256_fmadd_pd(
          ew, ew, _mm256_fmadd_pd(ex, ex, _mm256_fmadd_pd(ey, ey, _mm256_mul_pd(ez, ez))));
      const __m256d re = _mm256_fmadd_pd(
          rw, ew, _mm256_fmadd_pd(rx, ex, _mm256_fmadd_pd(ry, ey, _mm256_mul_pd(rz, ez))));
      const __m256d degenerate = _mm256_cmp_pd(ee, zero, _CMP_LE_OQ);
      __m256d t = _mm256_blendv_pd(_mm256_div_pd(re, ee), zero, degenerate);
      t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
      const __m256d dw = _mm256_fnmadd_pd(t, ew, rw);
      const __m256d dx = _mm256_fnmadd_pd(t, ex, rx);
      const __m256d dy = _mm256_fnmadd_pd(t, ey, ry);
      const __m256d dz = _mm256_fnmadd_pd(t, ez, rz);
      const __m256d d2 = _mm256_fmadd_pd(
          dw, dw, _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz))));
      // Padding lanes are zero-length segments at vertex 0, a real vertex, so
      // including them cannot lower the minimum below the true value.
      best = _mm256_min_pd(best, d2);
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  return std::sqrt(std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3])));
}

}  // namespace regulink::simd::avx2
