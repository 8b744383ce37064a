#include "regulink/curve_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace regulink {

namespace {

double gap(const UnitQuaternion& a, const UnitQuaternion& b) {
  return (a.vector() - b.vector()).norm();
}

simd::Points4 single_point(const UnitQuaternion& p) {
  simd::Points4 out;
  out.push_back(p.w(), p.x(), p.y(), p.z());
  return out;
}

// Unit tangent of the fiber through p, oriented by det[k, w1, w2] > 0 for
// the value basis (t1, t2).
Eigen::Vector3d fiber_tangent(const S2Map& f, const UnitQuaternion& p, const Eigen::Vector3d& t1,
                              const Eigen::Vector3d& t2, const DifferentialOptions& options) {
  const auto j = differential_at_value(f, p, t1, t2, options);
  const Eigen::Vector3d r1 = j.row(0).transpose();
  const Eigen::Vector3d r2 = j.row(1).transpose();
  const Eigen::Vector3d k = r1.cross(r2);
  const double n = k.norm();
  if (!(n > kRegularityMargin * kRegularityMargin)) {
    throw NotRegularError(f.name() + ": differential drops rank on the traced fiber");
  }
  return k / n;
}

PolylineLoop trace_from(const S2Map& f, const PointS2& v, const UnitQuaternion& start,
                        const TraceConfig& config, const Eigen::Vector3d& t1,
                        const Eigen::Vector3d& t2) {
  DifferentialOptions diff_options;
  diff_options.richardson = false;
  NewtonOptions newton;
  newton.tolerance = config.corrector_tolerance;
  newton.differential = diff_options;

  PolylineLoop loop;
  loop.orientation = config.reverse_value_basis ? -1 : 1;
  loop.step = config.step;
  loop.vertices.push_back(start);
  loop.max_residual = (f(start).vector() - v.vector()).norm();

  const double c = std::cos(config.step);
  const double s = std::sin(config.step);
  UnitQuaternion p = start;
  double farthest = 0.0;
  for (long long n = 1; n <= config.max_steps; ++n) {
    const Eigen::Vector3d k = fiber_tangent(f, p, t1, t2, diff_options);
    const auto frame = tangent_frame(p);
    const Quaternion direction = frame[0] * k[0] + frame[1] * k[1] + frame[2] * k[2];
    const UnitQuaternion predicted = UnitQuaternion::normalize(p.q() * c + direction * s);
    const auto corrected = newton_to_fiber(f, v, predicted, newton);
    if (!corrected.converged) {
      std::ostringstream msg;
      msg << f.name() << ": corrector diverged after " << n << " steps at (" << p.w() << ", "
          << p.x() << ", " << p.y() << ", " << p.z() << "), residual " << corrected.residual;
      throw TracingError(msg.str());
    }
    const double moved = gap(corrected.point, p);
    if (moved < 0.25 * config.step || moved > 1.9 * config.step) {
      std::ostringstream msg;
      msg << f.name() << ": corrector jumped " << moved << " (step " << config.step
          << "); refine the step";
      throw TracingError(msg.str());
    }
    p = corrected.point;
    loop.max_residual = std::max(loop.max_residual, corrected.residual);
    const double to_start = gap(p, start);
    farthest = std::max(farthest, to_start);
    loop.vertices.push_back(p);
    if (loop.vertices.size() >= 12 && farthest > 3.0 * config.step && to_start < config.step) {
      loop.closure_gap = to_start;
      return loop;
    }
  }
  throw NonClosureError(f.name() + ": fiber did not close within " +
                        std::to_string(config.max_steps) + " steps");
}

}  // namespace

void TraceConfig::validate() const {
  if (!(step >= kMinTraceStep && step <= kMaxTraceStep)) {
    throw DomainError("TraceConfig: step " + std::to_string(step) + " outside [1e-4, 5e-2]");
  }
  if (!(corrector_tolerance > 0.0) || max_steps < 12 || seed_budget < 10) {
    throw DomainError("TraceConfig: invalid tolerance, step budget or seed budget");
  }
}

PolylineLoop PolylineLoop::from_vertices(std::vector<UnitQuaternion> vertices) {
  PolylineLoop loop;
  loop.vertices = std::move(vertices);
  loop.step = loop.max_gap();
  loop.closure_gap = loop.vertices.size() > 1 ? gap(loop.vertices.back(), loop.vertices.front()) : 0;
  return loop;
}

double PolylineLoop::length() const {
  double total = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    total += gap(vertices[k], vertices[(k + 1) % vertices.size()]);
  }
  return total;
}

double PolylineLoop::max_gap() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    worst = std::max(worst, gap(vertices[k], vertices[(k + 1) % vertices.size()]));
  }
  return worst;
}

PolylineLoop PolylineLoop::reversed() const {
  PolylineLoop out = *this;
  std::reverse(out.vertices.begin(), out.vertices.end());
  out.orientation = -orientation;
  return out;
}

PolylineLoop PolylineLoop::refined() const {
  PolylineLoop out = *this;
  out.vertices.clear();
  out.vertices.reserve(2 * vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& a = vertices[k];
    const auto& b = vertices[(k + 1) % vertices.size()];
    out.vertices.push_back(a);
    out.vertices.push_back(UnitQuaternion::normalize(a.q() + b.q()));
  }
  out.step = 0.5 * step;
  out.closure_gap = gap(out.vertices.back(), out.vertices.front());
  return out;
}

simd::Points4 PolylineLoop::points() const {
  simd::Points4 out;
  for (const auto& p : vertices) {
    out.push_back(p.w(), p.x(), p.y(), p.z());
  }
  return out;
}

simd::Points3 PolylineLoop::projected(const UnitQuaternion& pole) const {
  simd::Points3 out;
  for (const auto& p : vertices) {
    const Eigen::Vector3d y = stereographic(p, pole);
    out.push_back(y[0], y[1], y[2]);
  }
  return out;
}

void PolylineLoop::validate() const {
  if (vertices.size() < 12) {
    throw DomainError("PolylineLoop: fewer than 12 vertices");
  }
  for (const auto& p : vertices) {
    if (std::abs(p.q().norm() - 1.0) > 1e-10) {
      throw DomainError("PolylineLoop: vertex off the unit sphere");
    }
  }
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    if (!(gap(vertices[k], vertices[k + 1]) < 2.0 * step)) {
      throw DomainError("PolylineLoop: consecutive gap exceeds 2 * step");
    }
  }
  if (!(gap(vertices.back(), vertices.front()) < step)) {
    throw DomainError("PolylineLoop: closure gap exceeds step");
  }
}

std::vector<PolylineLoop> trace_preimage(const S2Map& f, const PointS2& v,
                                         const TraceConfig& config) {
  config.validate();
  auto [t1, t2] = tangent_basis(v);
  if (config.reverse_value_basis) {
    std::swap(t1, t2);
  }
  NewtonOptions newton;
  newton.tolerance = config.corrector_tolerance;
  const auto seeds = locate_preimages(f, v, config.seed_budget, config.seed, 16, newton);

  std::vector<PolylineLoop> loops;
  for (const auto& seed : seeds) {
    const auto probe = single_point(seed);
    const bool known = std::any_of(loops.begin(), loops.end(), [&](const PolylineLoop& loop) {
      return simd::min_point_segment_distance(probe, loop.points()) < 5.0 * config.step;
    });
    if (known) {
      continue;
    }
    auto loop = trace_from(f, v, seed, config, t1, t2);
    const bool duplicate = std::any_of(loops.begin(), loops.end(), [&](const PolylineLoop& other) {
      return hausdorff_distance(loop, other) < 5.0 * config.step;
    });
    if (!duplicate) {
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

double directed_hausdorff(const PolylineLoop& from, const PolylineLoop& to) {
  const auto polygon = to.points();
  double worst = 0.0;
  for (const auto& p : from.vertices) {
    worst = std::max(worst, simd::min_point_segment_distance(single_point(p), polygon));
  }
  return worst;
}

double hausdorff_distance(const PolylineLoop& a, const PolylineLoop& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double min_separation(const PolylineLoop& a, const PolylineLoop& b, simd::Backend backend) {
  const auto pa = a.points();
  const auto pb = b.points();
  return std::min(simd::min_point_segment_distance(pa, pb, backend),
                  simd::min_point_segment_distance(pb, pa, backend));
}

UnitQuaternion choose_projection_pole(const std::vector<const PolylineLoop*>& loops,
                                      std::uint64_t seed) {
  std::vector<UnitQuaternion> candidates;
  for (int axis = 0; axis < 4; ++axis) {
    Eigen::Vector4d e = Eigen::Vector4d::Unit(axis);
    candidates.push_back(UnitQuaternion::normalize(e));
    candidates.push_back(UnitQuaternion::normalize(Eigen::Vector4d(-e)));
  }
  Rng rng = make_rng(seed, 0x901EULL);
  for (int k = 0; k < 64; ++k) {
    candidates.push_back(sample_s3(rng));
  }
  std::vector<simd::Points4> polygons;
  for (const auto* loop : loops) {
    polygons.push_back(loop->points());
  }
  UnitQuaternion best = candidates.front();
  double best_distance = -1.0;
  for (const auto& c : candidates) {
    const auto probe = single_point(c);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& polygon : polygons) {
      d = std::min(d, simd::min_point_segment_distance(probe, polygon));
    }
    if (d > best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

IntegerEstimate linking_number(const PolylineLoop& a, const PolylineLoop& b,
                               const LinkingOptions& options) {
  if (a.size() < 3 || b.size() < 3) {
    throw DomainError("linking_number: loops need at least three vertices");
  }
  const double required = options.min_separation.value_or(10.0 * std::max(a.step, b.step));
  const double separation = min_separation(a, b, options.backend);
  if (!(separation > required)) {
    std::ostringstream msg;
    msg << "linking_number: loops are " << separation << " apart (need > " << required
        << "); refine the trace step";
    throw ProximityError(msg.str());
  }
  const UnitQuaternion pole = options.pole ? *options.pole
                                           : choose_projection_pole({&a, &b}, options.pole_seed);
  const double sum = simd::gauss_pair_sum(a.projected(pole), b.projected(pole), options.backend);
  auto estimate = IntegerEstimate::from_raw(sum / (4.0 * std::numbers::pi), 0.0,
                                            static_cast<long long>(a.size() * b.size()),
                                            options.pole_seed);
  if (estimate.residual >= kLinkingInconclusiveResidual) {
    std::ostringstream msg;
    msg << "linking_number: raw value " << estimate.raw << " is not near an integer";
    throw InconclusiveError(msg.str());
  }
  estimate.accepted = estimate.residual < kLinkingExactResidual;
  return estimate;
}

void write_loops(std::ostream& out, const std::vector<PolylineLoop>& loops,
                 const LoopExportHeader& header,
                 const std::optional<UnitQuaternion>& projection_pole) {
  out << "# regulink loop export\n";
  out << "# map: " << header.map_name << "\n";
  out << std::setprecision(17);
  out << "# value: " << header.value[0] << " " << header.value[1] << " " << header.value[2]
      << "\n";
  out << "# config: step=" << header.config.step
      << " corrector_tolerance=" << header.config.corrector_tolerance
      << " max_steps=" << header.config.max_steps
      << " seed_budget=" << header.config.seed_budget << "\n";
  out << "# seed: " << header.config.seed << "\n";
  if (projection_pole) {
    const auto& p = *projection_pole;
    out << "# coordinates: stereographic R^3 from pole " << p.w() << " " << p.x() << " " << p.y()
        << " " << p.z() << "\n";
  } else {
    out << "# coordinates: S^3 (w x y z)\n";
  }
  out << "# loops: " << loops.size() << "\n";
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const auto& loop = loops[k];
    out << "# loop " << k << " vertices=" << loop.size() << " orientation=" << loop.orientation
        << " step=" << loop.step << " closure_gap=" << loop.closure_gap
        << " max_residual=" << loop.max_residual << "\n";
    for (const auto& p : loop.vertices) {
      if (projection_pole) {
        const Eigen::Vector3d y = stereographic(p, *projection_pole);
        out << y[0] << " " << y[1] << " " << y[2] << "\n";
      } else {
        out << p.w() << " " << p.x() << " " << p.y() << " " << p.z() << "\n";
      }
    }
  }
}

std::vector<PolylineLoop> read_loops(std::istream& in) {
  std::vector<PolylineLoop> loops;
  std::vector<std::vector<UnitQuaternion>> vertices;
  std::vector<PolylineLoop> meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("# loop ", 0) == 0) {
        PolylineLoop m;
        std::istringstream fields(line.substr(7));
        std::string token;
        fields >> token;  // index
        while (fields >> token) {
          const auto eq = token.find('=');
          if (eq == std::string::npos) {
            continue;
          }
          const std::string key = token.substr(0, eq);
          const double value = std::stod(token.substr(eq + 1));
          if (key == "orientation") {
            m.orientation = static_cast<int>(value);
          } else if (key == "step") {
            m.step = value;
          } else if (key == "closure_gap") {
            m.closure_gap = value;
          } else if (key == "max_residual") {
            m.max_residual = value;
          }
        }
        meta.push_back(m);
        vertices.emplace_back();
      }
      continue;
    }
    if (vertices.empty()) {
      throw IoError("read_loops: vertex line before any '# loop' header");
    }
    std::istringstream fields(line);
    double w, x, y, z;
    if (!(fields >> w >> x >> y >> z)) {
      throw IoError("read_loops: expected four coordinates per vertex");
    }
    vertices.back().push_back(UnitQuaternion::normalize(Quaternion{w, x, y, z}));
  }
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    PolylineLoop loop = meta[k];
    loop.vertices = std::move(vertices[k]);
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace regulink
