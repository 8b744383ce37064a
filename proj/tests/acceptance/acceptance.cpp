// One line per acceptance criterion: PASS/FAIL, runtime, and a short detail.
// Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "regulink/curve_engine.hpp"
#include "regulink/diff_calc.hpp"
#include "regulink/invariants.hpp"
#include "regulink/named_maps.hpp"
#include "regulink/singularity_link.hpp"
#include "regulink/so4_isoclinic.hpp"

using namespace regulink;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Outcome&)> body;
};

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void hopf_fibration(Outcome& o) {
  const PointS2 v1 = default_N();
  const PointS2 v2 = PointS2::normalize(Eigen::Vector3d(0.2, -0.5, 0.84));
  const auto details = hopf_invariant_details(eval_N_map(mu_m(1)), v1, v2);
  const auto& h = details.estimate;
  o.require(h.rounded == 1 && h.residual < 0.01, "hopf_invariant = 1");
  double worst = 0.0;
  for (const auto& loop : details.fiber1) {
    worst = std::max(worst, hopf_fiber_deviation(loop, v1));
  }
  for (const auto& loop : details.fiber2) {
    worst = std::max(worst, hopf_fiber_deviation(loop, v2));
  }
  o.require(details.fiber1.size() == 1 && details.fiber2.size() == 1, "one circle per fiber");
  o.require(worst < 1e-5, "fibers within 1e-5 of great circles");
  o.detail << "H=" << h.raw << " hausdorff=" << worst;
}

void lemma_a(Outcome& o) {
  for (int m = 1; m <= 3; ++m) {
    o.detail << "m=" << m << ":";
    for (const auto& [v1, v2] : regular_value_pairs(3, 1000 + m)) {
      const auto h = hopf_invariant(eval_N_map(mu_m(m)), v1, v2);
      o.require(h.rounded == m && h.residual < 0.01, "H(mu_" + std::to_string(m) + ") = m");
      o.detail << " " << h.rounded;
    }
    o.detail << "  ";
  }
}

void degree_engine(Outcome& o) {
  for (int m = 1; m <= 4; ++m) {
    const auto e = degree(pow_map(m), 400'000, 17);
    o.require(e.rounded == m && e.standard_error < 0.05, "deg(pow_" + std::to_string(m) + ")");
    o.detail << "pow_" << m << "=" << e.raw << "(se " << e.standard_error << ") ";
  }
  const auto id = degree(identity_map(), 20'000, 17);
  o.require(id.rounded == 1, "deg(identity) = 1");
  o.detail << "id=" << id.raw;
}

void pair_degree_split(Outcome& o) {
  for (int m = 1; m <= 2; ++m) {
    const auto p = pair_degrees(j4_map(mu_m(m)), 200'000, 23);
    o.require(p.accepted() && p.a.rounded == m && p.b.rounded == m, "pair (m, m)");
    o.require(p.stable_class() == 2 * m, "stable class 2m");
    o.require(p.mod2() == 0, "mod-2 class 0");
    o.detail << "m=" << m << ": (" << p.a.rounded << "," << p.b.rounded << ") stable "
             << p.stable_class() << " mod2 " << p.mod2() << "  ";
  }
}

void parametrization(Outcome& o) {
  Rng rng = make_rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto c = [&] { return Complex(u(rng), u(rng)); };
  for (int d = 1; d <= 3; ++d) {
    double ga = 0.0, gb = 0.0;
    for (int n = 0; n < 10'000; ++n) {
      ga = std::max(ga, std::abs(hypersurface_g(psi_a({c(), c(), c()}, d), d)));
      gb = std::max(gb, std::abs(hypersurface_g(psi_b({c(), c(), c()}, d), d)));
    }
    o.require(ga < 1e-12 && gb < 1e-12, "|g o psi| < 1e-12");
    const double glue = gluing_defect(d, 10'000, 31);
    o.require(glue < 1e-10, "gluing < 1e-10");
    double sigma = 1e300;
    for (Chart chart : {Chart::kA, Chart::kB}) {
      const auto r = immersion_check(d, chart, 10'000, 37);
      o.require(r.passed && r.min_sigma6 > 1e-6, "immersion sigma6 > 1e-6");
      sigma = std::min(sigma, r.min_sigma6);
    }
    o.detail << "d=" << d << ": g " << std::max(ga, gb) << " glue " << glue << " sigma6 " << sigma
             << "  ";
  }
}

void frame_analysis(Outcome& o) {
  for (int d = 1; d <= 3; ++d) {
    const auto conj = find_degeneracies(d, FrameConvention::kConjugate, 100'000, 41);
    o.require(!conj.degenerate, "conjugate frame non-degenerate");
    o.require(std::abs(conj.sampled_min.det) >= 0.9 * conj.sampled_min_bound,
              "conjugate |det| bounded below");
    o.require(conj.max_bound_deviation < 1e-10, "|det| = (|x|^2 + |v^d|^2)^2");
    const auto literal = find_degeneracies(d, FrameConvention::kLiteral, 1000, 41);
    double worst_det = 0.0, worst_locus = 0.0;
    for (const auto& p : literal.constructed) {
      worst_det = std::max(worst_det, std::abs(p.det));
      worst_locus = std::max(worst_locus, std::abs(p.x * p.x + std::pow(p.v, 2 * d)));
    }
    o.require(literal.degenerate && !literal.constructed.empty(), "literal frame degenerates");
    o.require(worst_det < 1e-8 && worst_locus < 1e-12, "degeneracy on x^2 + v^2d = 0");
    o.detail << "d=" << d << ": min|det| " << std::abs(conj.sampled_min.det) << " literal |det| "
             << worst_det << "  ";
  }
}

void theorem3(Outcome& o) {
  int sign = 0;
  for (int d = 1; d <= 4; ++d) {
    const auto lc = link_class(d, 200'000, 43);
    const int s = lc.component.rounded > 0 ? 1 : -1;
    if (d <= 3) {
      o.require(lc.component.accepted && std::abs(lc.component.rounded) == d, "|a - b| = d");
      if (sign == 0) {
        sign = s;
      }
      o.require(s == sign, "sign consistent across d");
    }
    o.require(lc.mod2 == d % 2, "mod2 = d mod 2");
    o.detail << "d=" << d << ": a-b " << lc.component.rounded << " mod2 " << lc.mod2 << "  ";
  }
}

void property_suites(Outcome& o) {
  const auto hopf = eval_N_map(mu_m(1));
  const auto a = trace_preimage(hopf, default_N()).at(0);
  const auto b = trace_preimage(hopf, PointS2::normalize(Eigen::Vector3d(-0.3, 0.8, 0.5))).at(0);
  const auto ab = linking_number(a, b);
  o.require(std::abs(linking_number(b, a).raw - ab.raw) < 1e-9, "symmetry");
  o.require(std::abs(linking_number(a.reversed(), b).raw + ab.raw) < 1e-9, "antisymmetry");
  double drift = std::abs(linking_number(a.refined(), b.refined()).raw - ab.raw);
  Rng rng = make_rng(47);
  for (int n = 0; n < 5; ++n) {
    LinkingOptions opts;
    opts.pole = sample_s3(rng);
    drift = std::max(drift, std::abs(linking_number(a, b, opts).raw - ab.raw));
  }
  o.require(drift < 1e-9, "subdivision / projection drift < 1e-9");

  const auto f = eval_N_map(mu_m(2));
  bool independent = true;
  for (const auto& [v1, v2] : regular_value_pairs(4, 53)) {
    independent = independent && hopf_invariant(f, v1, v2).rounded == 2;
  }
  o.require(independent, "regular-value independence");

  bool invariant = true;
  for (int n = 0; n < 3; ++n) {
    const auto p = sample_s3(rng), q = sample_s3(rng);
    invariant = invariant && degree(compose(pow_map(3), rotation_map(p, q)), 200'000, 59).rounded == 3;
  }
  o.require(invariant, "degree invariant under rotation precomposition");

  double round_trip = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const IsoclinicPair pair{sample_s3(rng), sample_s3(rng)};
    const auto back = isoclinic_split(pair.matrix(), pair);
    round_trip = std::max({round_trip, (back.left.vector() - pair.left.vector()).norm(),
                           (back.right.vector() - pair.right.vector()).norm()});
  }
  o.require(round_trip < 1e-9, "isoclinic round trip");

  DifferentialOptions fd;
  fd.source = DifferentialSource::kFiniteDifference;
  double diff = 0.0;
  for (int n = 0; n < 100; ++n) {
    const auto p = sample_s3(rng);
    for (int m = 1; m <= 3; ++m) {
      diff = std::max(diff, max_abs_diff(differential(pow_map(m), p).coefficients,
                                         differential(pow_map(m), p, fd).coefficients));
      const auto g = eval_N_map(mu_m(m));
      diff = std::max(diff, max_abs_diff(differential(g, p).coefficients,
                                         differential(g, p, fd).coefficients));
    }
    diff = std::max(diff, max_abs_diff(differential(rho_map(), p).coefficients,
                                       differential(rho_map(), p, fd).coefficients));
  }
  o.require(diff < 1e-5, "finite differences vs analytic");
  o.detail << "drift " << drift << " isoclinic " << round_trip << " fd " << diff;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Hopf fibration", 30, hopf_fibration},
      {2, "Hopf invariant of eval_N o mu_m is m", 180, lemma_a},
      {3, "degree engine", 120, degree_engine},
      {4, "pair degrees of j4 o mu_m", 300, pair_degree_split},
      {5, "parametrization identities", 300, parametrization},
      {6, "frame analysis", 300, frame_analysis},
      {7, "link classes of X_d", 600, theorem3},
      {8, "property suites", 300, property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_s) {
      o.pass = false;
      o.detail << " [over budget " << c.budget_s << " s]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d %s (%.2f s) %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", seconds,
                c.title.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
