#pragma once

// Verification reports and the regulink command line.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "regulink/integer_estimate.hpp"
#include "regulink/singularity_link.hpp"

namespace regulink {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitInconclusive = 4,
};

// Fixed conventions every report carries, as (key, statement) pairs.
std::vector<std::pair<std::string, std::string>> conventions_ledger();

struct CheckEntry {
  std::string name;
  // The mathematical statement the check verifies.
  std::string anchor;
  double raw = 0.0;
  long long rounded = 0;
  double residual = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
  // Failed for lack of precision rather than a wrong value. Not serialized.
  bool inconclusive = false;

  static CheckEntry from_estimate(std::string name, std::string anchor, const IntegerEstimate& e,
                                  long long expected);
  // A real-valued bound check: pass iff value < bound.
  static CheckEntry below(std::string name, std::string anchor, double value, double bound);
  // pass iff value > bound.
  static CheckEntry above(std::string name, std::string anchor, double value, double bound);
  static CheckEntry flag(std::string name, std::string anchor, bool pass, double raw = 0.0);
};

struct RunReport {
  std::string command;
  Json params = Json::object();
  std::vector<CheckEntry> checks;
  std::uint64_t seed = 0;
  long long samples = 0;
  double elapsed_ms = 0.0;

  bool pass() const;
  bool inconclusive() const;
  // 0 when every check passes, 4 when the only failures are inconclusive,
  // 1 otherwise.
  int exit_code() const;
  Json to_json() const;
};

void print_report(std::ostream& out, const RunReport& report);

struct RunSettings {
  std::uint64_t seed = 1;
  std::optional<long long> samples;
  std::optional<int> workers;
  double step = 5e-3;
};

inline constexpr long long kMinHopfSamples = 100;

// Hopf invariant of eval_N o mu_m over three seeded regular-value pairs.
RunReport cmd_hopf(int m, const RunSettings& settings);

// Degree of a registry map: identity, pow:m, eval-frame:d, left-mult.
RunReport cmd_degree(const std::string& map, const RunSettings& settings);

// Link class of X_d plus parametrization residual and gluing checks. With the
// literal convention the frame degeneracy is reported and the run is
// inconclusive.
RunReport cmd_link_class(int d, FrameConvention convention, const RunSettings& settings);

struct TraceRequest {
  int m = 1;
  Eigen::Vector3d value{1.0, 0.0, 0.0};
  // "mu" (eval_N o mu_m) or "constant" (the constant map at N).
  std::string map = "mu";
  std::optional<std::string> out_path;
  bool projected = false;
};

// Traces the fiber and writes it to out_path (or `out`). Critical or empty
// fibers give an inconclusive report.
RunReport cmd_trace(const TraceRequest& request, const RunSettings& settings, std::ostream& out);

const std::vector<std::string>& verify_suites();
std::vector<RunReport> cmd_verify(const std::string& suite, const RunSettings& settings);

// Full command line (argv without the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regulink
