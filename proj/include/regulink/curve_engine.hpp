#pragma once

// Preimage circles of regular values of maps S^3 -> S^2, traced by
// predictor-corrector continuation, and exact linking numbers of the
// resulting closed polygons.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "regulink/diff_calc.hpp"
#include "regulink/integer_estimate.hpp"
#include "regulink/simd/kernels.hpp"

namespace regulink {

inline constexpr double kMinTraceStep = 1e-4;
inline constexpr double kMaxTraceStep = 5e-2;

struct TraceConfig {
  double step = 5e-3;
  double corrector_tolerance = 1e-10;
  long long max_steps = 1'000'000;
  int seed_budget = 2000;
  std::uint64_t seed = 1;
  // Trace with the basis (t2, t1) of T_v S^2 instead of (t1, t2).
  bool reverse_value_basis = false;

  void validate() const;
};

struct PolylineLoop {
  std::vector<UnitQuaternion> vertices;
  // +1 when traced with the standard oriented basis of T_v S^2, -1 with the
  // reversed one.
  int orientation = 1;
  double step = 0.0;
  double closure_gap = 0.0;
  double max_residual = 0.0;

  // Wraps hand-built vertices (e.g. an analytic circle); step is set to the
  // largest consecutive gap.
  static PolylineLoop from_vertices(std::vector<UnitQuaternion> vertices);

  std::size_t size() const { return vertices.size(); }
  double length() const;
  double max_gap() const;
  PolylineLoop reversed() const;
  // Inserts the normalized midpoint of every segment.
  PolylineLoop refined() const;
  simd::Points4 points() const;
  simd::Points3 projected(const UnitQuaternion& pole) const;

  // Checks the structural invariants: at least 12 unit vertices, consecutive
  // gaps below 2 * step, closure gap below step. Throws DomainError.
  void validate() const;
};

std::vector<PolylineLoop> trace_preimage(const S2Map& f, const PointS2& v,
                                         const TraceConfig& config = {});

// max over vertices of `from` of the distance to the polygon `to` (in R^4).
double directed_hausdorff(const PolylineLoop& from, const PolylineLoop& to);
double hausdorff_distance(const PolylineLoop& a, const PolylineLoop& b);
double min_separation(const PolylineLoop& a, const PolylineLoop& b,
                      simd::Backend backend = simd::default_backend());

// Pole on S^3 maximizing the minimal distance to all given loops, chosen from
// the 8 coordinate units and 64 seeded random candidates.
UnitQuaternion choose_projection_pole(const std::vector<const PolylineLoop*>& loops,
                                      std::uint64_t seed = 0x9013ULL);

inline constexpr double kLinkingExactResidual = 1e-6;
inline constexpr double kLinkingInconclusiveResidual = 1e-3;

struct LinkingOptions {
  simd::Backend backend = simd::default_backend();
  std::optional<UnitQuaternion> pole;
  // Required minimal distance between the loops; defaults to 10 * step.
  std::optional<double> min_separation;
  std::uint64_t pole_seed = 0x9013ULL;
};

// Linking number of two disjoint closed loops on S^3: stereographic
// projection, then the exact segment-pair Gauss sum divided by 4 pi.
// accepted is set when the residual is below 1e-6.
IntegerEstimate linking_number(const PolylineLoop& a, const PolylineLoop& b,
                               const LinkingOptions& options = {});

struct LoopExportHeader {
  std::string map_name;
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  TraceConfig config;
};

// Plain-text vertex tables: '#' header lines, then one vertex per line. With
// a pole, vertices are written as stereographic R^3 coordinates.
void write_loops(std::ostream& out, const std::vector<PolylineLoop>& loops,
                 const LoopExportHeader& header,
                 const std::optional<UnitQuaternion>& projection_pole = std::nullopt);

// Reads back the S^3 form written by write_loops.
std::vector<PolylineLoop> read_loops(std::istream& in);

}  // namespace regulink
