#pragma once

// Quaternion and rotation algebra on S^3, S^2, SO(3) and SO(4).
//
// Conventions (also reported verbatim by conventions_ledger()):
//   * A quaternion w + x i + y j + z k is the vector (w, x, y, z) of R^4.
//   * Pure imaginary quaternions are identified with R^3 via (i, j, k) <-> (e1, e2, e3).
//   * S^3 inside C^2: q = z1 + z2 j with z1 = w + x i, z2 = y + z i.
//   * The oriented tangent frame of S^3 at q is (i q, j q, k q).

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace regulink {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kOrthogonalityTolerance = 1e-10;

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  static Quaternion from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  static Quaternion pure(const Eigen::Vector3d& v) { return {0.0, v[0], v[1], v[2]}; }
  // q = z1 + z2 j
  static Quaternion from_complex(Complex z1, Complex z2) {
    return {z1.real(), z1.imag(), z2.real(), z2.imag()};
  }

  Eigen::Vector4d vector() const { return {w, x, y, z}; }
  Eigen::Vector3d imaginary() const { return {x, y, z}; }
  Complex z1() const { return {w, x}; }
  Complex z2() const { return {y, z}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const;

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion operator+(const Quaternion& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  constexpr Quaternion operator-(const Quaternion& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
  constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }
  // Hamilton product.
  constexpr Quaternion operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }
};

constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

// A point of S^3. Construction validates the unit invariant; use
// UnitQuaternion::normalize to project an arbitrary non-zero quaternion.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Quaternion& q);

  static UnitQuaternion identity() { return {}; }
  static UnitQuaternion normalize(const Quaternion& q);
  static UnitQuaternion normalize(const Eigen::Vector4d& v) {
    return normalize(Quaternion::from_vector(v));
  }

  const Quaternion& q() const { return q_; }
  double w() const { return q_.w; }
  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }
  Eigen::Vector4d vector() const { return q_.vector(); }
  Complex z1() const { return q_.z1(); }
  Complex z2() const { return q_.z2(); }

  UnitQuaternion conj() const { return from_trusted(q_.conj()); }
  UnitQuaternion operator-() const { return from_trusted(-q_); }
  // Product of unit quaternions, renormalized to absorb rounding.
  UnitQuaternion operator*(const UnitQuaternion& o) const;

 private:
  static UnitQuaternion from_trusted(const Quaternion& q) {
    UnitQuaternion u;
    u.q_ = q;
    return u;
  }

  Quaternion q_ = Quaternion::one();
};

class PointS2 {
 public:
  PointS2() = default;
  PointS2(double n1, double n2, double n3);
  explicit PointS2(const Eigen::Vector3d& n);

  static PointS2 normalize(const Eigen::Vector3d& v);

  const Eigen::Vector3d& vector() const { return n_; }
  double operator[](int i) const { return n_[i]; }
  PointS2 operator-() const;

 private:
  Eigen::Vector3d n_{1.0, 0.0, 0.0};
};

class Rot3 {
 public:
  Rot3() = default;
  explicit Rot3(const Eigen::Matrix3d& m);

  static Rot3 identity() { return {}; }
  const Eigen::Matrix3d& matrix() const { return m_; }
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
  Rot3 operator*(const Rot3& o) const { return Rot3(m_ * o.m_); }

 private:
  Eigen::Matrix3d m_ = Eigen::Matrix3d::Identity();
};

class Rot4 {
 public:
  Rot4() = default;
  explicit Rot4(const Eigen::Matrix4d& m);

  static Rot4 identity() { return {}; }
  const Eigen::Matrix4d& matrix() const { return m_; }
  Eigen::Vector4d operator*(const Eigen::Vector4d& v) const { return m_ * v; }
  Rot4 operator*(const Rot4& o) const { return Rot4(m_ * o.m_); }

 private:
  Eigen::Matrix4d m_ = Eigen::Matrix4d::Identity();
};

// Matrices of x -> q x and x -> x q acting on R^4 = H.
Eigen::Matrix4d left_multiplication_matrix(const Quaternion& q);
Eigen::Matrix4d right_multiplication_matrix(const Quaternion& q);

// The double cover S^3 -> SO(3): rho(q) v = Im(q v conj(q)).
Rot3 rho(const UnitQuaternion& q);

// Degree-m self-map of S^3: (z1, z2) -> (z1^m, z2) / |(z1^m, z2)|. Requires m >= 1.
UnitQuaternion pow_m(int m, const UnitQuaternion& p);

// Evaluation SO(3) -> S^2, R -> R N.
PointS2 eval_N(const Rot3& r, const PointS2& n);

// Default evaluation point N = (1, 0, 0), making eval_N o rho the Hopf map q -> q i conj(q).
inline PointS2 default_N() { return PointS2(1.0, 0.0, 0.0); }

// Oriented orthonormal tangent frame (i q, j q, k q) of S^3 at q.
std::array<Quaternion, 3> tangent_frame(const UnitQuaternion& q);

// Orthonormal tangent basis (t1, t2) of S^2 at n with t1 x t2 = n. t1 is the
// Gram-Schmidt image of the coordinate axis least aligned with n (lowest
// index on ties).
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const PointS2& n);

// Stereographic projection from `pole` onto the 3-plane orthogonal to it,
// in coordinates of the frame (i pole, j pole, k pole). -pole maps to 0.
Eigen::Vector3d stereographic(const UnitQuaternion& p, const UnitQuaternion& pole);
UnitQuaternion inverse_stereographic(const Eigen::Vector3d& y, const UnitQuaternion& pole);

inline constexpr double kStereographicPoleTolerance = 1e-9;

// Seeded uniform sampling. make_rng derives an independent generator for
// (seed, stream) so that batched Monte-Carlo runs are partition-deterministic.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);
UnitQuaternion sample_s3(Rng& rng);
PointS2 sample_s2(Rng& rng);

}  // namespace regulink
