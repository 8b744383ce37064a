#pragma once

// The hypersurface X_d = {xy - z(z + v^d) = 0} in C^4, its two-chart
// parametrization over (t, x, v) / (t', y, v), the normal frames along the
// t = 0 slice, and the pi_3 class of the resulting frame map S^3 -> SO(4).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "regulink/integer_estimate.hpp"
#include "regulink/invariants.hpp"
#include "regulink/so4_isoclinic.hpp"

namespace regulink {

inline constexpr double kHypersurfaceTolerance = 1e-12;
inline constexpr double kChartOverlapTolerance = 1e-9;
inline constexpr double kImmersionMargin = 1e-6;

struct AmbientPoint {
  Complex x, y, z, v;

  Eigen::Matrix<double, 8, 1> real() const;
  double norm() const;
};

struct ChartPointA {
  Complex t, x, v;
};

struct ChartPointB {
  Complex t_prime, y, v;
};

void check_degree(int d);

// g(x, y, z, v) = xy - z(z + v^d).
Complex hypersurface_g(const AmbientPoint& p, int d);

AmbientPoint psi_a(const ChartPointA& p, int d);
AmbientPoint psi_b(const ChartPointB& p, int d);

// (t, x, v) -> (1/t, t^2 x + t v^d, v). ProjectionError for |t| < 1e-9.
ChartPointB chart_change(const ChartPointA& p, int d);
// (t', y, v) -> (1/t', t'^2 y - t' v^d, v).
ChartPointA chart_change_inverse(const ChartPointB& p, int d);

// max over random chart-A points with |t| in [0.1, 10] and |x|, |v| <= 2 of
// |psi_b(chart_change(p)) - psi_a(p)| / max(1, |psi_a(p)|).
double gluing_defect(int d, long long samples, std::uint64_t seed);

enum class ShearForm {
  kConjugate,  // (t, x - s conj(t) v^d, v)
  kLiteral     // (t, x - s t v^d, v)
};

// DomainError unless s lies in [0, 1]. The conjugate form is the one that,
// followed by the clutching map on |t| = 1, reproduces the chart change.
ChartPointA shear_diffeotopy(const ChartPointA& p, double s, int d,
                             ShearForm form = ShearForm::kConjugate);
ChartPointA shear_inverse(const ChartPointA& p, double s, int d,
                          ShearForm form = ShearForm::kConjugate);

// (t, x, v) -> (t, t^2 x, v).
ChartPointA clutch(const ChartPointA& p);

enum class FrameConvention { kLiteral, kConjugate };

std::string to_string(FrameConvention c);
FrameConvention parse_convention(const std::string& s);

struct NormalFrame {
  // Columns u1..u4 in the real coordinates (Re y, Im y, Re z, Im z).
  Eigen::Matrix4d u;
  Eigen::Matrix4d gram;
  double det = 0.0;
  FrameConvention convention = FrameConvention::kConjugate;
};

// u1 = (a1, a2, x1, x2), u2 = (a2, -a1, x2, -x1) with a = v^d; then either
// u3 = (x1, x2, -a1, -a2), u4 = (-x2, x1, a2, -a1)  (literal, CLI name "paper")
// or  u3 = (x1, -x2, -a1, a2), u4 = (x2, x1, -a2, -a1) (conjugate).
// DomainError for (x, v) = 0.
NormalFrame frame_field(Complex x, Complex v, int d, FrameConvention convention);

// The S^3 of the (x, v) plane: x = z1(q), v = z2(q).
std::pair<Complex, Complex> xv_of(const UnitQuaternion& q);

class DegenerateFrameError : public DomainError {
 public:
  DegenerateFrameError(const std::string& what, Complex x, Complex v, double det)
      : DomainError(what), x_(x), v_(v), det_(det) {}
  Complex x() const { return x_; }
  Complex v() const { return v_; }
  double det() const { return det_; }

 private:
  Complex x_, v_;
  double det_;
};

inline constexpr double kDegenerateFrameTolerance = 1e-8;

// Gram-Schmidt of (u1, u2, u3, u4) in order, followed by the swap of the last
// two columns when det < 0. Throws DegenerateFrameError when |det| falls below
// 1e-8 (only reachable with the literal convention).
Rot4 orthonormal_frame(const NormalFrame& frame, bool* swapped = nullptr);

SO4Map frame_map(int d, FrameConvention convention = FrameConvention::kConjugate);

// Orientation flag (det < 0 before normalization), read at (x, v) = (1, 0).
bool frame_orientation_swapped(int d, FrameConvention convention);

struct DegeneracyPoint {
  Complex x, v;
  double det = 0.0;
};

struct DegeneracyReport {
  FrameConvention convention = FrameConvention::kConjugate;
  int d = 1;
  // Points of {x^2 + v^(2d) = 0} on S^3 (x = +-i v^d) and their determinants.
  std::vector<DegeneracyPoint> constructed;
  // Smallest |det| over the random samples, and where it occurred.
  DegeneracyPoint sampled_min;
  // Smallest (|x|^2 + |v^d|^2)^2 over the same samples, and the largest
  // pointwise | |det| - (|x|^2 + |v^d|^2)^2 | relative to it.
  double sampled_min_bound = 0.0;
  double max_bound_deviation = 0.0;
  long long samples = 0;
  bool degenerate = false;  // some constructed point has |det| < 1e-8
};

DegeneracyReport find_degeneracies(int d, FrameConvention convention, long long samples,
                                   std::uint64_t seed, int constructed_points = 8,
                                   std::optional<int> workers = std::nullopt);

struct LinkClass {
  int d = 1;
  IntegerEstimate component;  // a - b, the pi_3(S^3) part
  int mod2 = 0;
  bool orientation_swapped = false;
  std::optional<PairDegrees> pairs;
};

// Degree of q -> frame_map(d)(q) e1; with cross_check also the pair degrees.
LinkClass link_class(int d, long long samples, std::uint64_t seed,
                     const DegreeOptions& options = {}, bool cross_check = false);

enum class Chart { kA, kB };

struct ImmersionReport {
  Chart chart = Chart::kA;
  int d = 1;
  long long samples = 0;
  double min_sigma6 = 0.0;
  double max_residual = 0.0;
  int injectivity_pairs = 0;
  // min over the pairs of |Psi(p) - Psi(q)| / |p - q|.
  double min_separation_ratio = 0.0;
  bool passed = false;
  std::optional<ChartPointA> counterexample_a;
  std::optional<ChartPointB> counterexample_b;
};

// Complex 4x3 Jacobians of psi_a (columns d/dt, d/dx, d/dv) and psi_b
// (d/dt', d/dy, d/dv).
Eigen::Matrix<Complex, 4, 3> psi_a_jacobian(const ChartPointA& p, int d);
Eigen::Matrix<Complex, 4, 3> psi_b_jacobian(const ChartPointB& p, int d);

// Real 8x6 form of a complex Jacobian (real coordinates ordered Re, Im per
// complex coordinate).
Eigen::Matrix<double, 8, 6> realify(const Eigen::Matrix<Complex, 4, 3>& j);

// Samples |t|, |x|, |v| <= radius uniformly in the disc.
ImmersionReport immersion_check(int d, Chart chart, long long samples, std::uint64_t seed,
                                double radius = 2.0, int injectivity_pairs = 1000,
                                std::optional<int> workers = std::nullopt);

// Singular values of the real 8x4 Jacobian of psi_a in (x, v) at t = 0 over
// random samples: {min, max}. Both equal 1 for the coordinate inclusion.
std::pair<double, double> slice_singular_values(int d, long long samples, std::uint64_t seed);

// Plain-text tables, '#' header (d, chart or convention, seed), then one
// row per point.
void write_chart_table(std::ostream& out, int d, Chart chart, long long samples,
                       std::uint64_t seed);
void write_frame_table(std::ostream& out, int d, FrameConvention convention, long long samples,
                       std::uint64_t seed);

}  // namespace regulink
