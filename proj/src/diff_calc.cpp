#include "regulink/diff_calc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/LU>

namespace regulink {

namespace detail {

void check_step(double h) {
  if (!(h >= kMinDifferentialStep && h <= kMaxDifferentialStep)) {
    throw DomainError("differential: step " + std::to_string(h) + " outside [1e-7, 1e-3]");
  }
}

}  // namespace detail

Eigen::Matrix<double, 2, 3> differential_at_value(const S2Map& f, const UnitQuaternion& p,
                                                  const Eigen::Vector3d& t1,
                                                  const Eigen::Vector3d& t2,
                                                  const DifferentialOptions& options) {
  const PointS2 center = f(p);
  const auto cols = ambient_differential(f, p, center, options);
  Eigen::Matrix<double, 2, 3> j;
  j.row(0) = t1.transpose() * cols;
  j.row(1) = t2.transpose() * cols;
  return j;
}

NewtonResult newton_to_fiber(const S2Map& f, const PointS2& v, const UnitQuaternion& start,
                             const NewtonOptions& options) {
  const auto [t1, t2] = tangent_basis(v);
  NewtonResult result{start, (f(start).vector() - v.vector()).norm(), 0, false};
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    if (result.residual < options.tolerance) {
      result.converged = true;
      return result;
    }
    const Eigen::Vector3d fp = f(result.point).vector();
    const Eigen::Vector2d e(t1.dot(fp), t2.dot(fp));
    const auto j = differential_at_value(f, result.point, t1, t2, options.differential);
    const Eigen::Matrix2d jjt = j * j.transpose();
    if (std::abs(jjt.determinant()) < 1e-24) {
      return result;
    }
    Eigen::Vector3d delta = -j.transpose() * jjt.inverse() * e;
    const double len = delta.norm();
    if (len > 0.5) {
      delta *= 0.5 / len;
    }
    const auto frame = tangent_frame(result.point);
    const Quaternion direction = frame[0] * delta[0] + frame[1] * delta[1] + frame[2] * delta[2];
    bool improved = false;
    double lambda = 1.0;
    for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
      const UnitQuaternion trial = UnitQuaternion::normalize(result.point.q() + direction * lambda);
      const double r = (f(trial).vector() - v.vector()).norm();
      if (r < result.residual) {
        result.point = trial;
        result.residual = r;
        improved = true;
        break;
      }
    }
    if (!improved) {
      return result;
    }
  }
  result.converged = result.residual < options.tolerance;
  return result;
}

std::vector<UnitQuaternion> locate_preimages(const S2Map& f, const PointS2& v, int budget,
                                             std::uint64_t seed, int candidates,
                                             const NewtonOptions& options) {
  Rng rng = make_rng(seed, 0x5EEDULL);
  std::vector<UnitQuaternion> points;
  std::vector<double> distance;
  points.reserve(static_cast<std::size_t>(budget));
  distance.reserve(static_cast<std::size_t>(budget));
  for (int s = 0; s < budget; ++s) {
    points.push_back(sample_s3(rng));
    distance.push_back((f(points.back()).vector() - v.vector()).norm());
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  const auto keep = std::min<std::size_t>(order.size(), static_cast<std::size_t>(candidates));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) { return distance[a] < distance[b]; });

  std::vector<NewtonResult> found;
  for (std::size_t k = 0; k < keep; ++k) {
    auto r = newton_to_fiber(f, v, points[order[k]], options);
    if (r.converged) {
      found.push_back(r);
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.residual < b.residual; });
  std::vector<UnitQuaternion> out;
  out.reserve(found.size());
  for (const auto& r : found) {
    out.push_back(r.point);
  }
  return out;
}

std::string to_string(RegularityStatus status) {
  switch (status) {
    case RegularityStatus::kRegular:
      return "regular";
    case RegularityStatus::kCritical:
      return "critical";
    case RegularityStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

RegularityReport is_regular_value(const S2Map& f, const PointS2& v, int samples,
                                  std::uint64_t seed) {
  if (samples < 10) {
    throw DomainError("is_regular_value: need at least 10 samples");
  }
  RegularityReport report;
  const auto preimages = locate_preimages(f, v, samples, seed);
  if (preimages.empty()) {
    return report;
  }
  const auto [t1, t2] = tangent_basis(v);
  DifferentialOptions options;
  options.richardson = false;
  report.margin = std::numeric_limits<double>::infinity();
  for (const auto& p : preimages) {
    const auto j = differential_at_value(f, p, t1, t2, options);
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(j);
    report.margin = std::min(report.margin, svd.singularValues().minCoeff());
    ++report.preimages_checked;
  }
  report.status =
      report.margin > kRegularityMargin ? RegularityStatus::kRegular : RegularityStatus::kCritical;
  return report;
}

}  // namespace regulink
