#include "regulink/singularity_link.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "regulink/parallel.hpp"

namespace regulink {

namespace {

constexpr long long kBatch = 4096;

Complex ipow(Complex z, int d) {
  Complex out(1.0, 0.0);
  for (int k = 0; k < d; ++k) {
    out *= z;
  }
  return out;
}

Complex sample_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, theta);
}

double sigma6(const Eigen::Matrix<Complex, 4, 3>& j) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 6>> svd(realify(j));
  return svd.singularValues()[5];
}

struct ChartSample {
  ChartPointA a;
  ChartPointB b;
};

ChartSample sample_chart(Rng& rng, double radius) {
  for (;;) {
    const Complex t = sample_disc(rng, radius);
    const Complex w = sample_disc(rng, radius);
    const Complex v = sample_disc(rng, radius);
    if (std::abs(w) + std::abs(v) > 0.0) {
      return {{t, w, v}, {t, w, v}};
    }
  }
}

double distance(const AmbientPoint& p, const AmbientPoint& q) {
  return (p.real() - q.real()).norm();
}

double chart_distance(const ChartSample& p, const ChartSample& q) {
  return std::sqrt(std::norm(p.a.t - q.a.t) + std::norm(p.a.x - q.a.x) + std::norm(p.a.v - q.a.v));
}

// Positive root of r^2 + r^(2d) = 1.
double degeneracy_radius(int d) {
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid + std::pow(mid, 2 * d) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_complex(std::ostream& out, Complex z) { out << ' ' << z.real() << ' ' << z.imag(); }

}  // namespace

Eigen::Matrix<double, 8, 1> AmbientPoint::real() const {
  Eigen::Matrix<double, 8, 1> out;
  out << x.real(), x.imag(), y.real(), y.imag(), z.real(), z.imag(), v.real(), v.imag();
  return out;
}

double AmbientPoint::norm() const { return real().norm(); }

void check_degree(int d) {
  if (d < 1) {
    throw DomainError("degree d must be >= 1, got " + std::to_string(d));
  }
}

Complex hypersurface_g(const AmbientPoint& p, int d) {
  check_degree(d);
  return p.x * p.y - p.z * (p.z + ipow(p.v, d));
}

AmbientPoint psi_a(const ChartPointA& p, int d) {
  check_degree(d);
  const Complex a = ipow(p.v, d);
  return {p.x, p.t * p.t * p.x + p.t * a, p.t * p.x, p.v};
}

AmbientPoint psi_b(const ChartPointB& p, int d) {
  check_degree(d);
  const Complex a = ipow(p.v, d);
  const Complex& s = p.t_prime;
  return {s * s * p.y - s * a, p.y, s * p.y - a, p.v};
}

ChartPointB chart_change(const ChartPointA& p, int d) {
  check_degree(d);
  if (std::abs(p.t) < kChartOverlapTolerance) {
    throw ProjectionError("chart_change: |t| < 1e-9 is outside the chart overlap");
  }
  return {1.0 / p.t, p.t * p.t * p.x + p.t * ipow(p.v, d), p.v};
}

ChartPointA chart_change_inverse(const ChartPointB& p, int d) {
  check_degree(d);
  if (std::abs(p.t_prime) < kChartOverlapTolerance) {
    throw ProjectionError("chart_change_inverse: |t'| < 1e-9 is outside the chart overlap");
  }
  const Complex& s = p.t_prime;
  return {1.0 / s, s * s * p.y - s * ipow(p.v, d), p.v};
}

double gluing_defect(int d, long long samples, std::uint64_t seed) {
  check_degree(d);
  Rng rng = make_rng(seed, 0x61D3ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (long long k = 0; k < samples; ++k) {
    // log-uniform modulus in [0.1, 10]
    const double r = std::pow(10.0, 2.0 * u(rng) - 1.0);
    const ChartPointA p{std::polar(r, 2.0 * std::numbers::pi * u(rng)), sample_disc(rng, 2.0),
                        sample_disc(rng, 2.0)};
    const AmbientPoint a = psi_a(p, d);
    const AmbientPoint b = psi_b(chart_change(p, d), d);
    worst = std::max(worst, distance(a, b) / std::max(1.0, a.norm()));
  }
  return worst;
}

namespace {

Complex shear_term(const ChartPointA& p, double s, int d, ShearForm form) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError("shear_diffeotopy: s must lie in [0, 1]");
  }
  check_degree(d);
  const Complex t = form == ShearForm::kConjugate ? std::conj(p.t) : p.t;
  return s * t * ipow(p.v, d);
}

}  // namespace

ChartPointA shear_diffeotopy(const ChartPointA& p, double s, int d, ShearForm form) {
  return {p.t, p.x - shear_term(p, s, d, form), p.v};
}

ChartPointA shear_inverse(const ChartPointA& p, double s, int d, ShearForm form) {
  return {p.t, p.x + shear_term(p, s, d, form), p.v};
}

ChartPointA clutch(const ChartPointA& p) { return {p.t, p.t * p.t * p.x, p.v}; }

std::string to_string(FrameConvention c) {
  return c == FrameConvention::kLiteral ? "paper" : "conjugate";
}

FrameConvention parse_convention(const std::string& s) {
  if (s == "paper") {
    return FrameConvention::kLiteral;
  }
  if (s == "conjugate") {
    return FrameConvention::kConjugate;
  }
  throw UsageError("unknown convention '" + s + "' (expected paper or conjugate)");
}

NormalFrame frame_field(Complex x, Complex v, int d, FrameConvention convention) {
  check_degree(d);
  if (std::abs(x) + std::abs(v) == 0.0) {
    throw DomainError("frame_field: (x, v) = 0");
  }
  const Complex a = ipow(v, d);
  const double a1 = a.real(), a2 = a.imag(), x1 = x.real(), x2 = x.imag();
  NormalFrame f;
  f.convention = convention;
  f.u.col(0) << a1, a2, x1, x2;
  f.u.col(1) << a2, -a1, x2, -x1;
  if (convention == FrameConvention::kLiteral) {
    f.u.col(2) << x1, x2, -a1, -a2;
    f.u.col(3) << -x2, x1, a2, -a1;
  } else {
    f.u.col(2) << x1, -x2, -a1, a2;
    f.u.col(3) << x2, x1, -a2, -a1;
  }
  f.gram = f.u.transpose() * f.u;
  f.det = f.u.determinant();
  return f;
}

std::pair<Complex, Complex> xv_of(const UnitQuaternion& q) { return {q.z1(), q.z2()}; }

Rot4 orthonormal_frame(const NormalFrame& frame, bool* swapped) {
  if (std::abs(frame.det) < kDegenerateFrameTolerance) {
    // Recover (x, v) from u1 = (a, x) only for reporting.
    const Complex x(frame.u(2, 0), frame.u(3, 0));
    throw DegenerateFrameError("frame is degenerate (det " + std::to_string(frame.det) + ")", x,
                               Complex(), frame.det);
  }
  Eigen::Matrix4d q = frame.u;
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < c; ++k) {
      q.col(c) -= q.col(k).dot(q.col(c)) * q.col(k);
    }
    q.col(c).normalize();
  }
  const bool swap = frame.det < 0.0;
  if (swap) {
    q.col(2).swap(q.col(3));
  }
  if (swapped != nullptr) {
    *swapped = swap;
  }
  return Rot4(q);
}

SO4Map frame_map(int d, FrameConvention convention) {
  check_degree(d);
  return SO4Map("frame:" + std::to_string(d) + ":" + to_string(convention),
                [d, convention](const UnitQuaternion& q) {
                  const auto [x, v] = xv_of(q);
                  try {
                    return orthonormal_frame(frame_field(x, v, d, convention));
                  } catch (const DegenerateFrameError& e) {
                    throw DegenerateFrameError(e.what(), x, v, e.det());
                  }
                });
}

bool frame_orientation_swapped(int d, FrameConvention convention) {
  bool swapped = false;
  orthonormal_frame(frame_field(1.0, 0.0, d, convention), &swapped);
  return swapped;
}

DegeneracyReport find_degeneracies(int d, FrameConvention convention, long long samples,
                                   std::uint64_t seed, int constructed_points,
                                   std::optional<int> workers) {
  check_degree(d);
  DegeneracyReport report;
  report.convention = convention;
  report.d = d;
  report.samples = samples;
  const double r = degeneracy_radius(d);
  for (int k = 0; k < constructed_points; ++k) {
    const Complex v = std::polar(r, 2.0 * std::numbers::pi * k / constructed_points);
    const Complex x = (k % 2 == 0 ? Complex(0.0, 1.0) : Complex(0.0, -1.0)) * ipow(v, d);
    const double det = frame_field(x, v, d, convention).det;
    report.constructed.push_back({x, v, det});
    report.degenerate = report.degenerate || std::abs(det) < kDegenerateFrameTolerance;
  }

  struct Partial {
    DegeneracyPoint min{};
    double min_bound = std::numeric_limits<double>::infinity();
    double deviation = 0.0;
  };
  BatchPlan plan{samples, kBatch, resolve_workers(workers)};
  const auto parts = run_batches<Partial>(plan, [&](long long b, long long count) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    Partial part;
    part.min.det = std::numeric_limits<double>::infinity();
    for (long long s = 0; s < count; ++s) {
      const auto [x, v] = xv_of(sample_s3(rng));
      const double det = frame_field(x, v, d, convention).det;
      const double bound = std::pow(std::norm(x) + std::norm(ipow(v, d)), 2);
      if (std::abs(det) < std::abs(part.min.det)) {
        part.min = {x, v, det};
      }
      part.min_bound = std::min(part.min_bound, bound);
      part.deviation = std::max(part.deviation, std::abs(std::abs(det) - bound) / bound);
    }
    return part;
  });
  report.sampled_min.det = std::numeric_limits<double>::infinity();
  report.sampled_min_bound = std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    if (std::abs(part.min.det) < std::abs(report.sampled_min.det)) {
      report.sampled_min = part.min;
    }
    report.sampled_min_bound = std::min(report.sampled_min_bound, part.min_bound);
    report.max_bound_deviation = std::max(report.max_bound_deviation, part.deviation);
  }
  return report;
}

LinkClass link_class(int d, long long samples, std::uint64_t seed, const DegreeOptions& options,
                     bool cross_check) {
  check_degree(d);
  const SO4Map f = frame_map(d, FrameConvention::kConjugate);
  LinkClass out;
  out.d = d;
  out.orientation_swapped = frame_orientation_swapped(d, FrameConvention::kConjugate);
  out.component = degree(evaluation_map(f), samples, seed, options);
  out.mod2 = static_cast<int>(((out.component.rounded % 2) + 2) % 2);
  if (cross_check) {
    out.pairs = pair_degrees(f, samples, seed, options);
  }
  return out;
}

Eigen::Matrix<Complex, 4, 3> psi_a_jacobian(const ChartPointA& p, int d) {
  check_degree(d);
  const Complex a = ipow(p.v, d);
  const Complex da = static_cast<double>(d) * ipow(p.v, d - 1);
  Eigen::Matrix<Complex, 4, 3> j;
  j << 0.0, 1.0, 0.0,
       2.0 * p.t * p.x + a, p.t * p.t, p.t * da,
       p.x, p.t, 0.0,
       0.0, 0.0, 1.0;
  return j;
}

Eigen::Matrix<Complex, 4, 3> psi_b_jacobian(const ChartPointB& p, int d) {
  check_degree(d);
  const Complex& s = p.t_prime;
  const Complex a = ipow(p.v, d);
  const Complex da = static_cast<double>(d) * ipow(p.v, d - 1);
  Eigen::Matrix<Complex, 4, 3> j;
  j << 2.0 * s * p.y - a, s * s, -s * da,
       0.0, 1.0, 0.0,
       p.y, s, -da,
       0.0, 0.0, 1.0;
  return j;
}

Eigen::Matrix<double, 8, 6> realify(const Eigen::Matrix<Complex, 4, 3>& j) {
  Eigen::Matrix<double, 8, 6> out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) {
      const Complex z = j(r, c);
      out.block<2, 2>(2 * r, 2 * c) << z.real(), -z.imag(), z.imag(), z.real();
    }
  }
  return out;
}

ImmersionReport immersion_check(int d, Chart chart, long long samples, std::uint64_t seed,
                                double radius, int injectivity_pairs,
                                std::optional<int> workers) {
  check_degree(d);
  auto image = [&](const ChartSample& s) {
    return chart == Chart::kA ? psi_a(s.a, d) : psi_b(s.b, d);
  };
  auto jacobian = [&](const ChartSample& s) {
    return chart == Chart::kA ? psi_a_jacobian(s.a, d) : psi_b_jacobian(s.b, d);
  };

  struct Partial {
    double min_sigma = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    std::optional<ChartSample> bad;
  };
  BatchPlan plan{samples, kBatch, resolve_workers(workers)};
  const auto parts = run_batches<Partial>(plan, [&](long long b, long long count) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    Partial part;
    for (long long k = 0; k < count; ++k) {
      const ChartSample s = sample_chart(rng, radius);
      const double sigma = sigma6(jacobian(s));
      const double residual = std::abs(hypersurface_g(image(s), d));
      part.min_sigma = std::min(part.min_sigma, sigma);
      part.max_residual = std::max(part.max_residual, residual);
      if (!part.bad && (sigma <= kImmersionMargin || residual >= kHypersurfaceTolerance)) {
        part.bad = s;
      }
    }
    return part;
  });

  ImmersionReport report;
  report.chart = chart;
  report.d = d;
  report.samples = samples;
  report.min_sigma6 = std::numeric_limits<double>::infinity();
  std::optional<ChartSample> bad;
  for (const auto& part : parts) {
    report.min_sigma6 = std::min(report.min_sigma6, part.min_sigma);
    report.max_residual = std::max(report.max_residual, part.max_residual);
    if (!bad && part.bad) {
      bad = part.bad;
    }
  }

  Rng rng = make_rng(seed, 0x1A7EC7ULL);
  report.min_separation_ratio = std::numeric_limits<double>::infinity();
  bool injective = true;
  for (int k = 0; k < injectivity_pairs; ++k) {
    const ChartSample p = sample_chart(rng, radius);
    const ChartSample q = sample_chart(rng, radius);
    const double apart = chart_distance(p, q);
    if (apart == 0.0) {
      continue;
    }
    ++report.injectivity_pairs;
    const double separated = distance(image(p), image(q));
    report.min_separation_ratio = std::min(report.min_separation_ratio, separated / apart);
    if (separated <= kHypersurfaceTolerance) {
      injective = false;
      if (!bad) {
        bad = p;
      }
    }
  }

  report.passed = !bad && injective;
  if (bad) {
    if (chart == Chart::kA) {
      report.counterexample_a = bad->a;
    } else {
      report.counterexample_b = bad->b;
    }
  }
  return report;
}

std::pair<double, double> slice_singular_values(int d, long long samples, std::uint64_t seed) {
  check_degree(d);
  Rng rng = make_rng(seed, 0x511CEULL);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (long long k = 0; k < samples; ++k) {
    const ChartSample s = sample_chart(rng, 2.0);
    const ChartPointA p{0.0, s.a.x, s.a.v};
    const Eigen::Matrix<double, 8, 6> j = realify(psi_a_jacobian(p, d));
    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 4>> svd(j.rightCols<4>().eval());
    lo = std::min(lo, svd.singularValues().minCoeff());
    hi = std::max(hi, svd.singularValues().maxCoeff());
  }
  return {lo, hi};
}

void write_chart_table(std::ostream& out, int d, Chart chart, long long samples,
                       std::uint64_t seed) {
  check_degree(d);
  const char* name = chart == Chart::kA ? "A" : "B";
  out << "# d " << d << "\n# chart " << name << "\n# seed " << seed << "\n";
  out << (chart == Chart::kA ? "# t.re t.im x.re x.im" : "# t'.re t'.im y.re y.im")
      << " v.re v.im x.re x.im y.re y.im z.re z.im v.re v.im |g|\n";
  out << std::setprecision(17);
  Rng rng = make_rng(seed, 0);
  for (long long k = 0; k < samples; ++k) {
    const ChartSample s = sample_chart(rng, 2.0);
    const AmbientPoint p = chart == Chart::kA ? psi_a(s.a, d) : psi_b(s.b, d);
    write_complex(out, s.a.t);
    write_complex(out, s.a.x);
    write_complex(out, s.a.v);
    for (const Complex c : {p.x, p.y, p.z, p.v}) {
      write_complex(out, c);
    }
    out << ' ' << std::abs(hypersurface_g(p, d)) << '\n';
  }
}

void write_frame_table(std::ostream& out, int d, FrameConvention convention, long long samples,
                       std::uint64_t seed) {
  check_degree(d);
  out << "# d " << d << "\n# convention " << to_string(convention) << "\n# seed " << seed
      << "\n# x.re x.im v.re v.im u1 u2 u3 u4 det\n";
  out << std::setprecision(17);
  Rng rng = make_rng(seed, 0);
  for (long long k = 0; k < samples; ++k) {
    const auto [x, v] = xv_of(sample_s3(rng));
    const NormalFrame f = frame_field(x, v, d, convention);
    write_complex(out, x);
    write_complex(out, v);
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 4; ++r) {
        out << ' ' << f.u(r, c);
      }
    }
    out << ' ' << f.det << '\n';
  }
}

}  // namespace regulink
