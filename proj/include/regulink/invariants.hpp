#pragma once

// Integer homotopy invariants of maps out of S^3: Monte-Carlo mapping degree
// for S^3 -> S^3, the Hopf invariant of S^3 -> S^2 via linking of traced
// fibers, and the pi_3(SO(3)) class through the evaluation map.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "regulink/curve_engine.hpp"
#include "regulink/diff_calc.hpp"
#include "regulink/integer_estimate.hpp"

namespace regulink {

// Thrown when an estimate misses its residual / standard-error gate; carries
// the estimate so callers can report it.
class InconclusiveEstimate : public InconclusiveError {
 public:
  InconclusiveEstimate(const std::string& what, IntegerEstimate estimate)
      : InconclusiveError(what), estimate_(estimate) {}
  const IntegerEstimate& estimate() const { return estimate_; }

 private:
  IntegerEstimate estimate_;
};

inline constexpr long long kMinDegreeSamples = 10'000;

struct DegreeOptions {
  std::optional<int> workers;
  long long batch_size = 4096;
  DifferentialOptions differential{kDefaultDifferentialStep, DifferentialSource::kAuto, false};
  // Throw InconclusiveEstimate when the gates fail (otherwise return the
  // unaccepted estimate).
  bool throw_on_inconclusive = true;
};

// Monte-Carlo mean of det(df) in the frames (i p, j p, k p) and
// (i f(p), j f(p), k f(p)) over uniform samples of S^3.
IntegerEstimate degree(const SphereMap& f, long long samples, std::uint64_t seed,
                       const DegreeOptions& options = {});

// Global sign making the Hopf fibration q -> q i conj(q) return +1 under the
// fiber orientation rule of trace_preimage and our stereographic coordinates.
int hopf_sign_calibration();

struct HopfDetails {
  IntegerEstimate estimate;
  std::vector<PolylineLoop> fiber1;
  std::vector<PolylineLoop> fiber2;
};

// Sum of linking numbers over component pairs of the fibers over v1 and v2,
// globally signed by hopf_sign_calibration(). Rejects critical values.
HopfDetails hopf_invariant_details(const S2Map& f, const PointS2& v1, const PointS2& v2,
                                   const TraceConfig& config = {});
IntegerEstimate hopf_invariant(const S2Map& f, const PointS2& v1, const PointS2& v2,
                               const TraceConfig& config = {});

// `count` seeded pairs of well-separated values.
std::vector<std::pair<PointS2, PointS2>> regular_value_pairs(int count, std::uint64_t seed);

// Default pair used by so3_class.
std::pair<PointS2, PointS2> default_value_pair();

// Closed-form fiber of the Hopf map q -> q i conj(q) over v: the great circle
// q0 {cos t + i sin t} with q0 i conj(q0) = v, as a polygon.
PolylineLoop hopf_fiber_circle(const PointS2& v, int vertices = 4096);
// Hausdorff distance (in R^4) between a traced loop and hopf_fiber_circle(v).
double hopf_fiber_deviation(const PolylineLoop& loop, const PointS2& v);

// Class in pi_3(SO(3)) = Z, read off as the Hopf invariant of eval_N o mu.
IntegerEstimate so3_class(const SO3Map& mu, const TraceConfig& config = {});

}  // namespace regulink
