#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "regulink/curve_engine.hpp"
#include "regulink/quat_core.hpp"

namespace regulink::test {

inline Eigen::Vector3d point(const simd::Points3& p, std::size_t k) {
  k %= p.size();
  return {p.x[k], p.y[k], p.z[k]};
}

// Midpoint-rule Gauss integral (1/4 pi) sum (r_a - r_b) . (da x db) / |r_a - r_b|^3.
// Independent of the solid-angle kernel; accurate to O(h^2).
inline double gauss_midpoint_linking(const simd::Points3& a, const simd::Points3& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Eigen::Vector3d a0 = point(a, i), a1 = point(a, i + 1);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Eigen::Vector3d b0 = point(b, j), b1 = point(b, j + 1);
      const Eigen::Vector3d r = 0.5 * (a0 + a1) - 0.5 * (b0 + b1);
      sum += r.dot((a1 - a0).cross(b1 - b0)) / std::pow(r.norm(), 3);
    }
  }
  return sum / (4.0 * std::numbers::pi);
}

// Great circle t -> cos t p + sin t q for orthonormal p, q.
inline PolylineLoop great_circle(const Quaternion& p, const Quaternion& q, int n) {
  std::vector<UnitQuaternion> v;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    v.push_back(UnitQuaternion::normalize(p * std::cos(t) + q * std::sin(t)));
  }
  return PolylineLoop::from_vertices(std::move(v));
}

// Small circle of angular radius r around the unit point c, in the plane of
// the unit tangent directions e1, e2 at c.
inline PolylineLoop small_circle(const Quaternion& c, const Quaternion& e1, const Quaternion& e2,
                                 double r, int n) {
  std::vector<UnitQuaternion> v;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    v.push_back(UnitQuaternion::normalize(c * std::cos(r) +
                                          (e1 * std::cos(t) + e2 * std::sin(t)) * std::sin(r)));
  }
  return PolylineLoop::from_vertices(std::move(v));
}

inline double distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return (a.vector() - b.vector()).norm();
}

inline double sign_free_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return std::min((a.vector() - b.vector()).norm(), (a.vector() + b.vector()).norm());
}

}  // namespace regulink::test
