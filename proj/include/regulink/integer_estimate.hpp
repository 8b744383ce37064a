#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace regulink {

inline constexpr double kAcceptedResidual = 0.1;
inline constexpr double kAcceptedStandardError = 0.05;

// A numerically estimated integer invariant.
struct IntegerEstimate {
  double raw = 0.0;
  long long rounded = 0;
  double residual = 0.0;  // |raw - rounded|
  double standard_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
  bool accepted = false;

  static IntegerEstimate from_raw(double raw, double standard_error, long long samples,
                                  std::uint64_t seed) {
    IntegerEstimate e;
    e.raw = raw;
    e.rounded = std::llround(raw);
    e.residual = std::abs(raw - static_cast<double>(e.rounded));
    e.standard_error = standard_error;
    e.samples = samples;
    e.seed = seed;
    e.accepted = e.residual < kAcceptedResidual && standard_error < kAcceptedStandardError;
    return e;
  }

  long long value() const { return rounded; }
};

std::string describe(const IntegerEstimate& e);

}  // namespace regulink
