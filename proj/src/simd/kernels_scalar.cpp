#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "regulink/errors.hpp"
#include "regulink/simd/kernels.hpp"

namespace regulink::simd {

namespace {

double dot3(const double u[3], const double v[3]) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double norm3(const double u[3]) { return std::sqrt(dot3(u, u)); }

bool cpu_has_avx2() {
#if defined(REGULINK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

double scalar_gauss_pair_sum(const Points3& a, const Points3& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    const std::size_t i1 = (i + 1) % na;
    const double p0[3] = {a.x[i], a.y[i], a.z[i]};
    const double p1[3] = {a.x[i1], a.y[i1], a.z[i1]};
    double row = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t j1 = (j + 1) % nb;
      const double q0[3] = {b.x[j], b.y[j], b.z[j]};
      const double q1[3] = {b.x[j1], b.y[j1], b.z[j1]};
      row += segment_pair_gauss(p0, p1, q0, q1);
    }
    total += row;
  }
  return total;
}

double scalar_min_distance(const Points4& points, const Points4& loop) {
  const std::size_t n = loop.size();
  double best2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double p[4] = {points.w[i], points.x[i], points.y[i], points.z[i]};
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k1 = (k + 1) % n;
      const double a[4] = {loop.w[k], loop.x[k], loop.y[k], loop.z[k]};
      const double e[4] = {loop.w[k1] - a[0], loop.x[k1] - a[1], loop.y[k1] - a[2],
                           loop.z[k1] - a[3]};
      double ee = 0.0;
      double pe = 0.0;
      for (int c = 0; c < 4; ++c) {
        ee += e[c] * e[c];
        pe += (p[c] - a[c]) * e[c];
      }
      const double t = ee > 0.0 ? std::clamp(pe / ee, 0.0, 1.0) : 0.0;
      double d2 = 0.0;
      for (int c = 0; c < 4; ++c) {
        const double r = p[c] - a[c] - t * e[c];
        d2 += r * r;
      }
      best2 = std::min(best2, d2);
    }
  }
  return std::sqrt(best2);
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

Backend default_backend() {
  if (const char* forced = std::getenv("REGULINK_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") {
      return Backend::kScalar;
    }
    if (value == "avx2" && avx2_available()) {
      return Backend::kAvx2;
    }
  }
  return avx2_available() ? Backend::kAvx2 : Backend::kScalar;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::kScalar};
  if (avx2_available()) {
    out.push_back(Backend::kAvx2);
  }
  return out;
}

double triangle_solid_angle(const double p[3], const double q[3], const double r[3]) {
  const double qxr[3] = {q[1] * r[2] - q[2] * r[1], q[2] * r[0] - q[0] * r[2],
                         q[0] * r[1] - q[1] * r[0]};
  const double np = norm3(p);
  const double nq = norm3(q);
  const double nr = norm3(r);
  const double numerator = dot3(p, qxr);
  const double denominator = np * nq * nr + dot3(p, q) * nr + dot3(p, r) * nq + dot3(q, r) * np;
  return 2.0 * std::atan2(numerator, denominator);
}

double segment_pair_gauss(const double a[3], const double b[3], const double c[3],
                          const double d[3]) {
  const double v0[3] = {a[0] - c[0], a[1] - c[1], a[2] - c[2]};
  const double v1[3] = {b[0] - c[0], b[1] - c[1], b[2] - c[2]};
  const double v2[3] = {b[0] - d[0], b[1] - d[1], b[2] - d[2]};
  const double v3[3] = {a[0] - d[0], a[1] - d[1], a[2] - d[2]};
  return -(triangle_solid_angle(v0, v1, v2) + triangle_solid_angle(v0, v2, v3));
}

double gauss_pair_sum(const Points3& loop_a, const Points3& loop_b, Backend backend) {
  if (loop_a.size() < 2 || loop_b.size() < 2) {
    throw DomainError("gauss_pair_sum: polylines need at least two vertices");
  }
  if (backend == Backend::kAvx2) {
    if (!avx2_available()) {
      throw DomainError("gauss_pair_sum: AVX2 backend unavailable on this CPU");
    }
    return avx2::gauss_pair_sum(loop_a, loop_b);
  }
  return scalar_gauss_pair_sum(loop_a, loop_b);
}

double min_point_segment_distance(const Points4& points, const Points4& loop, Backend backend) {
  if (points.size() == 0 || loop.size() < 2) {
    throw DomainError("min_point_segment_distance: empty input");
  }
  if (backend == Backend::kAvx2) {
    if (!avx2_available()) {
      throw DomainError("min_point_segment_distance: AVX2 backend unavailable on this CPU");
    }
    return avx2::min_point_segment_distance(points, loop);
  }
  return scalar_min_distance(points, loop);
}

#if !defined(REGULINK_HAVE_AVX2)
namespace avx2 {
double gauss_pair_sum(const Points3&, const Points3&) {
  throw DomainError("AVX2 kernels not compiled in");
}
double min_point_segment_distance(const Points4&, const Points4&) {
  throw DomainError("AVX2 kernels not compiled in");
}
}  // namespace avx2
#endif

}  // namespace regulink::simd
