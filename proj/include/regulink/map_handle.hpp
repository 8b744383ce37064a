#pragma once

// Smooth maps out of S^3 into S^3, S^2, SO(3) or SO(4), given by an
// evaluation rule and, optionally, an analytic differential.

#include <functional>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "regulink/errors.hpp"
#include "regulink/quat_core.hpp"

namespace regulink {

// Embedding of each target manifold into a Euclidean space plus an
// orthonormal frame of its tangent space (frame columns live in the ambient
// space).
template <class T>
struct ManifoldTraits;

template <>
struct ManifoldTraits<UnitQuaternion> {
  static constexpr int kDim = 3;
  static constexpr int kAmbient = 4;
  static constexpr const char* kName = "S3";
  using Ambient = Eigen::Matrix<double, kAmbient, 1>;
  using Frame = Eigen::Matrix<double, kAmbient, kDim>;

  static Ambient embed(const UnitQuaternion& q) { return q.vector(); }
  static Frame frame(const UnitQuaternion& q) {
    const auto f = tangent_frame(q);
    Frame out;
    for (int a = 0; a < kDim; ++a) {
      out.col(a) = f[a].vector();
    }
    return out;
  }
};

template <>
struct ManifoldTraits<PointS2> {
  static constexpr int kDim = 2;
  static constexpr int kAmbient = 3;
  static constexpr const char* kName = "S2";
  using Ambient = Eigen::Matrix<double, kAmbient, 1>;
  using Frame = Eigen::Matrix<double, kAmbient, kDim>;

  static Ambient embed(const PointS2& n) { return n.vector(); }
  static Frame frame(const PointS2& n) {
    const auto [t1, t2] = tangent_basis(n);
    Frame out;
    out.col(0) = t1;
    out.col(1) = t2;
    return out;
  }
};

// SO(3) and SO(4) use the left-translated frame R * E / |E| for the standard
// skew basis E; the ambient vector is the column-major flattening of R.
template <>
struct ManifoldTraits<Rot3> {
  static constexpr int kDim = 3;
  static constexpr int kAmbient = 9;
  static constexpr const char* kName = "SO3";
  using Ambient = Eigen::Matrix<double, kAmbient, 1>;
  using Frame = Eigen::Matrix<double, kAmbient, kDim>;

  static Ambient embed(const Rot3& r) { return Eigen::Map<const Ambient>(r.matrix().data()); }
  static Frame frame(const Rot3& r) {
    Frame out;
    for (int a = 0; a < kDim; ++a) {
      Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
      const int b = (a + 1) % 3;
      const int c = (a + 2) % 3;
      e(c, b) = 1.0;
      e(b, c) = -1.0;
      const Eigen::Matrix3d t = r.matrix() * e / std::sqrt(2.0);
      out.col(a) = Eigen::Map<const Ambient>(t.data());
    }
    return out;
  }
};

template <>
struct ManifoldTraits<Rot4> {
  static constexpr int kDim = 6;
  static constexpr int kAmbient = 16;
  static constexpr const char* kName = "SO4";
  using Ambient = Eigen::Matrix<double, kAmbient, 1>;
  using Frame = Eigen::Matrix<double, kAmbient, kDim>;

  static Ambient embed(const Rot4& r) { return Eigen::Map<const Ambient>(r.matrix().data()); }
  static Frame frame(const Rot4& r) {
    Frame out;
    int col = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        Eigen::Matrix4d e = Eigen::Matrix4d::Zero();
        e(b, a) = 1.0;
        e(a, b) = -1.0;
        const Eigen::Matrix4d t = r.matrix() * e / std::sqrt(2.0);
        out.col(col++) = Eigen::Map<const Ambient>(t.data());
      }
    }
    return out;
  }
};

template <class Target>
class MapHandle {
 public:
  using Traits = ManifoldTraits<Target>;
  // Ambient-space derivatives along the domain frame (i p, j p, k p).
  using Columns = Eigen::Matrix<double, Traits::kAmbient, 3>;
  using EvalFn = std::function<Target(const UnitQuaternion&)>;
  using DifferentialFn = std::function<Columns(const UnitQuaternion&)>;
  // Chooses, among equivalent representatives of `value`, the one closest to
  // `reference`. Used for locally sign-aligned lifts; identity by default.
  using AlignFn = std::function<Target(const Target& value, const Target& reference)>;

  MapHandle(std::string name, EvalFn eval, DifferentialFn differential = {}, AlignFn align = {})
      : name_(std::move(name)),
        eval_(std::move(eval)),
        differential_(std::move(differential)),
        align_(std::move(align)) {}

  Target operator()(const UnitQuaternion& p) const {
    try {
      return eval_(p);
    } catch (const DomainError& e) {
      throw EvaluationError(name_ + ": evaluation failed: " + e.what());
    }
  }

  Target align(const Target& value, const Target& reference) const {
    return align_ ? align_(value, reference) : value;
  }

  const std::string& name() const { return name_; }
  static constexpr const char* target_name() { return Traits::kName; }
  bool has_analytic_differential() const { return static_cast<bool>(differential_); }
  const DifferentialFn& analytic_differential() const { return differential_; }

  MapHandle without_analytic_differential() const { return MapHandle(name_, eval_, {}, align_); }

 private:
  std::string name_;
  EvalFn eval_;
  DifferentialFn differential_;
  AlignFn align_;
};

using SphereMap = MapHandle<UnitQuaternion>;
using S2Map = MapHandle<PointS2>;
using SO3Map = MapHandle<Rot3>;
using SO4Map = MapHandle<Rot4>;

// outer o inner for inner: S^3 -> S^3. The chain rule supplies an analytic
// differential when both factors have one.
template <class Target>
MapHandle<Target> compose(const MapHandle<Target>& outer, const SphereMap& inner,
                          std::string name = {}) {
  if (name.empty()) {
    name = outer.name() + " o " + inner.name();
  }
  typename MapHandle<Target>::DifferentialFn differential;
  if (outer.has_analytic_differential() && inner.has_analytic_differential()) {
    differential = [outer, inner](const UnitQuaternion& p) {
      const UnitQuaternion q = inner(p);
      const Eigen::Matrix3d coeff = ManifoldTraits<UnitQuaternion>::frame(q).transpose() *
                         inner.analytic_differential()(p);
      return typename MapHandle<Target>::Columns(outer.analytic_differential()(q) * coeff);
    };
  }
  return MapHandle<Target>(
      std::move(name), [outer, inner](const UnitQuaternion& p) { return outer(inner(p)); },
      std::move(differential));
}

}  // namespace regulink
