#pragma once

// Differentials of map handles in orthonormal frames, and regular-value
// testing for maps S^3 -> S^2.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "regulink/map_handle.hpp"

namespace regulink {

inline constexpr double kDefaultDifferentialStep = 1e-5;
inline constexpr double kMinDifferentialStep = 1e-7;
inline constexpr double kMaxDifferentialStep = 1e-3;
inline constexpr double kRichardsonWarningThreshold = 1e-4;

enum class DifferentialSource {
  kAuto,             // analytic when the handle has one, finite differences otherwise
  kFiniteDifference  // always finite differences
};

struct DifferentialOptions {
  double step = kDefaultDifferentialStep;
  DifferentialSource source = DifferentialSource::kAuto;
  // Compare the step-h and step-h/2 stencils and flag disagreement.
  bool richardson = true;
};

template <class Target>
struct JacobianSample {
  static constexpr int kRows = ManifoldTraits<Target>::kDim;

  UnitQuaternion base;
  Target value;
  // Row b, column a: component along the b-th target frame vector of the
  // derivative along the a-th domain frame vector (i p, j p, k p).
  Eigen::Matrix<double, kRows, 3> coefficients;
  double smallest_singular_value = 0.0;
  bool analytic = false;
  bool precision_warning = false;
};

namespace detail {

void check_step(double h);

template <class Target>
typename MapHandle<Target>::Columns central_difference(const MapHandle<Target>& f,
                                                       const UnitQuaternion& p,
                                                       const Target& center, double h) {
  using Traits = ManifoldTraits<Target>;
  typename MapHandle<Target>::Columns out;
  const auto frame = tangent_frame(p);
  const double c = std::cos(h);
  const double s = std::sin(h);
  for (int a = 0; a < 3; ++a) {
    // Points at arc length +-h along the great circle through p in direction e_a p.
    const UnitQuaternion plus = UnitQuaternion::normalize(p.q() * c + frame[a] * s);
    const UnitQuaternion minus = UnitQuaternion::normalize(p.q() * c - frame[a] * s);
    const auto fp = Traits::embed(f.align(f(plus), center));
    const auto fm = Traits::embed(f.align(f(minus), center));
    out.col(a) = (fp - fm) / (2.0 * h);
  }
  if (!out.allFinite()) {
    throw EvaluationError(f.name() + ": non-finite finite-difference derivative");
  }
  return out;
}

template <int Rows>
double smallest_singular_value(const Eigen::Matrix<double, Rows, 3>& m) {
  Eigen::JacobiSVD<Eigen::Matrix<double, Rows, 3>> svd(m);
  return svd.singularValues().minCoeff();
}

}  // namespace detail

// Ambient-space derivative columns along (i p, j p, k p).
template <class Target>
typename MapHandle<Target>::Columns ambient_differential(const MapHandle<Target>& f,
                                                         const UnitQuaternion& p,
                                                         const Target& center,
                                                         const DifferentialOptions& options,
                                                         bool* analytic = nullptr,
                                                         bool* precision_warning = nullptr) {
  if (options.source == DifferentialSource::kAuto && f.has_analytic_differential()) {
    if (analytic != nullptr) {
      *analytic = true;
    }
    auto cols = f.analytic_differential()(p);
    if (!cols.allFinite()) {
      throw EvaluationError(f.name() + ": non-finite analytic differential");
    }
    return cols;
  }
  detail::check_step(options.step);
  if (analytic != nullptr) {
    *analytic = false;
  }
  auto coarse = detail::central_difference(f, p, center, options.step);
  if (!options.richardson) {
    return coarse;
  }
  const auto fine = detail::central_difference(f, p, center, 0.5 * options.step);
  if (precision_warning != nullptr) {
    *precision_warning = (coarse - fine).cwiseAbs().maxCoeff() > kRichardsonWarningThreshold;
  }
  // Richardson extrapolation of the two O(h^2) stencils.
  return (4.0 * fine - coarse) / 3.0;
}

template <class Target>
JacobianSample<Target> differential(const MapHandle<Target>& f, const UnitQuaternion& p,
                                    const DifferentialOptions& options = {}) {
  using Traits = ManifoldTraits<Target>;
  JacobianSample<Target> sample{p, f(p), {}, 0.0, false, false};
  const auto cols = ambient_differential(f, p, sample.value, options, &sample.analytic,
                                         &sample.precision_warning);
  sample.coefficients = Traits::frame(sample.value).transpose() * cols;
  sample.smallest_singular_value = detail::smallest_singular_value(sample.coefficients);
  return sample;
}

template <class Target>
JacobianSample<Target> differential(const MapHandle<Target>& f, const UnitQuaternion& p,
                                    double step) {
  DifferentialOptions options;
  options.step = step;
  return differential(f, p, options);
}

// ---------------------------------------------------------------------------
// Preimage location and regular values for maps S^3 -> S^2.

inline constexpr double kRegularityMargin = 1e-4;

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 60;
  DifferentialOptions differential{kDefaultDifferentialStep, DifferentialSource::kAuto, false};
};

struct NewtonResult {
  UnitQuaternion point;
  double residual = 0.0;  // |f(point) - v|
  int iterations = 0;
  bool converged = false;
};

// Differential of f at p expressed in a fixed oriented basis (t1, t2) of T_v S^2.
Eigen::Matrix<double, 2, 3> differential_at_value(const S2Map& f, const UnitQuaternion& p,
                                                  const Eigen::Vector3d& t1,
                                                  const Eigen::Vector3d& t2,
                                                  const DifferentialOptions& options);

// Damped Gauss-Newton onto the fiber f^{-1}(v), moving only in the 2-plane of
// T_p S^3 orthogonal to the kernel of df (minimum-norm steps).
NewtonResult newton_to_fiber(const S2Map& f, const PointS2& v, const UnitQuaternion& start,
                             const NewtonOptions& options = {});

// Rejection-samples `budget` points, keeps the `candidates` closest to the
// fiber and Newton-corrects them. Returns the converged points, best first.
std::vector<UnitQuaternion> locate_preimages(const S2Map& f, const PointS2& v, int budget,
                                             std::uint64_t seed, int candidates = 16,
                                             const NewtonOptions& options = {});

enum class RegularityStatus {
  kRegular,
  kCritical,
  kIndeterminate  // no preimage located within the seed budget
};

std::string to_string(RegularityStatus status);

struct RegularityReport {
  RegularityStatus status = RegularityStatus::kIndeterminate;
  // Smallest singular value of the 2x3 differential over the located preimages.
  double margin = 0.0;
  int preimages_checked = 0;

  bool regular() const { return status == RegularityStatus::kRegular; }
};

RegularityReport is_regular_value(const S2Map& f, const PointS2& v, int samples,
                                  std::uint64_t seed);

}  // namespace regulink
