#pragma once

// Data-parallel inner loops of the curve engine. Every kernel has a scalar
// reference implementation and an AVX2 implementation; the backend is picked
// at runtime (CPU feature check, overridable with REGULINK_SIMD=scalar|avx2)
// and the two are equivalence-tested against each other.

#include <cstddef>
#include <string_view>
#include <vector>

namespace regulink::simd {

enum class Backend { kScalar, kAvx2 };

std::string_view to_string(Backend backend);

// True when the AVX2 kernels were compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

// Best available backend, unless REGULINK_SIMD forces one.
Backend default_backend();

std::vector<Backend> available_backends();

// Structure-of-arrays point sets. As closed polylines, segment k joins vertex
// k to vertex (k + 1) mod n.
struct Points3 {
  std::vector<double> x, y, z;

  std::size_t size() const { return x.size(); }
  void push_back(double px, double py, double pz) {
    x.push_back(px);
    y.push_back(py);
    z.push_back(pz);
  }
};

struct Points4 {
  std::vector<double> w, x, y, z;

  std::size_t size() const { return w.size(); }
  void push_back(double pw, double px, double py, double pz) {
    w.push_back(pw);
    x.push_back(px);
    y.push_back(py);
    z.push_back(pz);
  }
};

// Signed solid angle of the triangle (p, q, r) seen from the origin, via the
// arctangent formula tan(omega/2) = p.(q x r) / (|p||q||r| + (p.q)|r| + (p.r)|q| + (q.r)|p|).
double triangle_solid_angle(const double p[3], const double q[3], const double r[3]);

// Exact Gauss double integral over the straight segments a->b and c->d,
// i.e. minus the solid angle of the difference parallelogram {x - y}.
double segment_pair_gauss(const double a[3], const double b[3], const double c[3],
                          const double d[3]);

// Sum of segment_pair_gauss over all segment pairs of two closed polylines:
// 4 pi times their linking number.
double gauss_pair_sum(const Points3& loop_a, const Points3& loop_b, Backend backend);
inline double gauss_pair_sum(const Points3& loop_a, const Points3& loop_b) {
  return gauss_pair_sum(loop_a, loop_b, default_backend());
}

// Minimum Euclidean distance in R^4 from any point of `points` to any segment
// of the closed polyline `loop`.
double min_point_segment_distance(const Points4& points, const Points4& loop, Backend backend);
inline double min_point_segment_distance(const Points4& points, const Points4& loop) {
  return min_point_segment_distance(points, loop, default_backend());
}

namespace avx2 {
double gauss_pair_sum(const Points3& loop_a, const Points3& loop_b);
double min_point_segment_distance(const Points4& points, const Points4& loop);
}  // namespace avx2

}  // namespace regulink::simd
