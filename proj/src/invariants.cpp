#include "regulink/invariants.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/LU>

#include "regulink/named_maps.hpp"
#include "regulink/parallel.hpp"

namespace regulink {

namespace {

struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  long long count = 0;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Calibrated once against the Hopf fibration (see the invariants tests).
constexpr int kHopfSign = 1;

}  // namespace

std::string describe(const IntegerEstimate& e) {
  std::ostringstream out;
  out << e.rounded << " (raw " << e.raw << ", residual " << e.residual << ", stderr "
      << e.standard_error << ", samples " << e.samples << ", seed " << e.seed << ")";
  return out.str();
}

int resolve_workers(std::optional<int> requested) {
  if (requested && *requested >= 1) {
    return *requested;
  }
  if (const char* env = std::getenv("REGULINK_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) {
      return n;
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

IntegerEstimate degree(const SphereMap& f, long long samples, std::uint64_t seed,
                       const DegreeOptions& options) {
  if (samples < kMinDegreeSamples) {
    throw DomainError("degree: need at least 10^4 samples");
  }
  const auto start = std::chrono::steady_clock::now();
  BatchPlan plan{samples, options.batch_size, resolve_workers(options.workers)};
  const auto batches = run_batches<MomentSums>(plan, [&](long long b, long long count) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    MomentSums m;
    for (long long s = 0; s < count; ++s) {
      const UnitQuaternion p = sample_s3(rng);
      const double det = differential(f, p, options.differential).coefficients.determinant();
      m.sum += det;
      m.sum_sq += det * det;
      ++m.count;
    }
    return m;
  });
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (const auto& m : batches) {
    sum.add(m.sum);
    sum_sq.add(m.sum_sq);
  }
  const double n = static_cast<double>(samples);
  const double mean = sum.value() / n;
  const double variance = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  auto estimate = IntegerEstimate::from_raw(mean, std::sqrt(variance / n), samples, seed);
  estimate.elapsed_ms = elapsed_ms(start);
  if (!estimate.accepted && options.throw_on_inconclusive) {
    throw InconclusiveEstimate(
        "degree(" + f.name() + "): inconclusive estimate " + describe(estimate) +
            "; increase the sample count",
        estimate);
  }
  return estimate;
}

int hopf_sign_calibration() { return kHopfSign; }

HopfDetails hopf_invariant_details(const S2Map& f, const PointS2& v1, const PointS2& v2,
                                   const TraceConfig& config) {
  config.validate();
  if ((v1.vector() - v2.vector()).norm() < 1e-6) {
    throw DomainError("hopf_invariant: the two values must be distinct");
  }
  const auto start = std::chrono::steady_clock::now();
  for (const PointS2* v : {&v1, &v2}) {
    const auto report = is_regular_value(f, *v, config.seed_budget, config.seed);
    if (report.status == RegularityStatus::kCritical) {
      std::ostringstream msg;
      msg << "hopf_invariant(" << f.name() << "): (" << (*v)[0] << ", " << (*v)[1] << ", "
          << (*v)[2] << ") is not a regular value (margin " << report.margin << ")";
      throw NotRegularError(msg.str());
    }
  }
  HopfDetails details;
  details.fiber1 = trace_preimage(f, v1, config);
  details.fiber2 = trace_preimage(f, v2, config);

  double raw = 0.0;
  long long vertices = 0;
  bool exact = true;
  for (const auto& a : details.fiber1) {
    for (const auto& b : details.fiber2) {
      const auto lk = linking_number(a, b);
      raw += lk.raw;
      exact = exact && lk.accepted;
    }
  }
  for (const auto& loop : details.fiber1) {
    vertices += static_cast<long long>(loop.size());
  }
  for (const auto& loop : details.fiber2) {
    vertices += static_cast<long long>(loop.size());
  }
  details.estimate = IntegerEstimate::from_raw(kHopfSign * raw, 0.0, vertices, config.seed);
  details.estimate.accepted = details.estimate.accepted && exact;
  details.estimate.elapsed_ms = elapsed_ms(start);
  return details;
}

IntegerEstimate hopf_invariant(const S2Map& f, const PointS2& v1, const PointS2& v2,
                               const TraceConfig& config) {
  return hopf_invariant_details(f, v1, v2, config).estimate;
}

std::vector<std::pair<PointS2, PointS2>> regular_value_pairs(int count, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xFA1EULL);
  std::vector<std::pair<PointS2, PointS2>> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const PointS2 a = sample_s2(rng);
    const PointS2 b = sample_s2(rng);
    const double separation = (a.vector() - b.vector()).norm();
    if (separation > 0.8 && separation < 1.8) {
      pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

std::pair<PointS2, PointS2> default_value_pair() {
  return {PointS2::normalize(Eigen::Vector3d(0.3, 0.8, -0.5)),
          PointS2::normalize(Eigen::Vector3d(-0.6, 0.2, 0.7))};
}

PolylineLoop hopf_fiber_circle(const PointS2& v, int vertices) {
  if (vertices < 12) {
    throw DomainError("hopf_fiber_circle: need at least 12 vertices");
  }
  // q0 = (1 - v i) / |1 - v i| carries i to v unless v = -i.
  const Quaternion vi = Quaternion::pure(v.vector()) * Quaternion::i();
  const Quaternion lift = Quaternion::one() - vi;
  const UnitQuaternion q0 =
      lift.norm() < 1e-8 ? UnitQuaternion(0.0, 0.0, 1.0, 0.0) : UnitQuaternion::normalize(lift);
  std::vector<UnitQuaternion> points;
  points.reserve(static_cast<std::size_t>(vertices));
  for (int k = 0; k < vertices; ++k) {
    const double t = 2.0 * std::numbers::pi * k / vertices;
    points.push_back(q0 * UnitQuaternion(std::cos(t), std::sin(t), 0.0, 0.0));
  }
  return PolylineLoop::from_vertices(std::move(points));
}

double hopf_fiber_deviation(const PolylineLoop& loop, const PointS2& v) {
  return hausdorff_distance(loop, hopf_fiber_circle(v));
}

IntegerEstimate so3_class(const SO3Map& mu, const TraceConfig& config) {
  const auto [v1, v2] = default_value_pair();
  return hopf_invariant(eval_N_map(mu), v1, v2, config);
}

}  // namespace regulink
