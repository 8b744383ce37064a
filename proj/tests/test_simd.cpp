#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "regulink/simd/kernels.hpp"
#include "support.hpp"

using namespace regulink::simd;

namespace {

Points3 random_loop(std::mt19937_64& rng, std::size_t n, double offset) {
  std::normal_distribution<double> g;
  Points3 p;
  for (std::size_t k = 0; k < n; ++k) {
    p.push_back(g(rng) + offset, g(rng), g(rng));
  }
  return p;
}

Points4 random_points4(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Points4 p;
  for (std::size_t k = 0; k < n; ++k) {
    p.push_back(g(rng), g(rng), g(rng), g(rng));
  }
  return p;
}

// Circle of radius r in the plane spanned by axes u, v, centred at c.
Points3 circle(const Eigen::Vector3d& c, int u, int v, double r, int n) {
  Points3 p;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    Eigen::Vector3d x = c;
    x[u] += r * std::cos(t);
    x[v] += r * std::sin(t);
    p.push_back(x[0], x[1], x[2]);
  }
  return p;
}

}  // namespace

TEST_CASE("solid angle of the octant triangle is pi/2") {
  const double e1[3] = {1, 0, 0}, e2[3] = {0, 1, 0}, e3[3] = {0, 0, 1};
  CHECK(triangle_solid_angle(e1, e2, e3) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(triangle_solid_angle(e1, e3, e2) == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-15));
  // Degenerate (coplanar with the origin) triangles subtend nothing.
  const double m[3] = {1, 1, 0};
  CHECK(triangle_solid_angle(e1, e2, m) == 0.0);
}

TEST_CASE("Gauss sum of a Hopf link and an unlinked pair") {
  const Points3 a = circle({0, 0, 0}, 0, 1, 1.0, 200);
  const Points3 b = circle({1, 0, 0}, 0, 2, 1.0, 200);
  const Points3 far = circle({5, 0, 0}, 0, 2, 1.0, 200);
  for (Backend backend : available_backends()) {
    CAPTURE(to_string(backend));
    const double lk = gauss_pair_sum(a, b, backend) / (4.0 * std::numbers::pi);
    CHECK(std::abs(std::abs(lk) - 1.0) < 1e-9);
    CHECK(std::abs(gauss_pair_sum(a, far, backend)) < 1e-9);
    // Midpoint oracle agrees to discretization accuracy.
    CHECK(std::abs(lk - regulink::test::gauss_midpoint_linking(a, b)) < 1e-2);
  }
}

TEST_CASE("scalar and AVX2 kernels agree, including tail sizes") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(5);
  for (std::size_t n : {3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 101u}) {
    for (std::size_t m : {3u, 4u, 6u, 13u, 50u}) {
      CAPTURE(n);
      CAPTURE(m);
      const Points3 a = random_loop(rng, n, 0.0);
      const Points3 b = random_loop(rng, m, 0.5);
      const double s = gauss_pair_sum(a, b, Backend::kScalar);
      const double v = gauss_pair_sum(a, b, Backend::kAvx2);
      CHECK(std::abs(s - v) < 1e-11);
      CHECK(std::abs(s - avx2::gauss_pair_sum(a, b)) < 1e-11);
      const Points4 pts = random_points4(rng, n);
      const Points4 loop = random_points4(rng, m);
      const double ds = min_point_segment_distance(pts, loop, Backend::kScalar);
      const double dv = min_point_segment_distance(pts, loop, Backend::kAvx2);
      CHECK(std::abs(ds - dv) < 1e-12);
    }
  }
}

TEST_CASE("point-segment distance against a hand case") {
  Points4 pts, loop;
  pts.push_back(0, 0, 1, 0);
  loop.push_back(-1, 0, 0, 0);
  loop.push_back(1, 0, 0, 0);
  loop.push_back(1, 1, 0, 0);
  for (Backend backend : available_backends()) {
    CHECK(min_point_segment_distance(pts, loop, backend) == doctest::Approx(1.0));
  }
}

TEST_CASE("REGULINK_SIMD forces the backend") {
  const char* old = std::getenv("REGULINK_SIMD");
  const std::string saved = old ? old : "";
  setenv("REGULINK_SIMD", "scalar", 1);
  CHECK(default_backend() == Backend::kScalar);
  setenv("REGULINK_SIMD", "avx2", 1);
  CHECK(default_backend() == (avx2_available() ? Backend::kAvx2 : Backend::kScalar));
  unsetenv("REGULINK_SIMD");
  CHECK(default_backend() == (avx2_available() ? Backend::kAvx2 : Backend::kScalar));
  if (old) {
    setenv("REGULINK_SIMD", saved.c_str(), 1);
  }
  CHECK(to_string(Backend::kScalar) == "scalar");
  CHECK(to_string(Backend::kAvx2) == "avx2");
}
