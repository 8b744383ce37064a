#include "regulink/quat_core.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "regulink/errors.hpp"

namespace regulink {

namespace {

void check_finite(const Quaternion& q, const char* what) {
  if (!std::isfinite(q.w) || !std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z)) {
    throw DomainError(std::string(what) + ": non-finite quaternion");
  }
}

template <class Matrix>
void check_rotation(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite matrix");
  }
  const double orth = (m.transpose() * m - Matrix::Identity()).cwiseAbs().maxCoeff();
  if (orth > kOrthogonalityTolerance) {
    throw DomainError(std::string(what) + ": matrix is not orthogonal (defect " +
                      std::to_string(orth) + ")");
  }
  const double det = m.determinant();
  if (std::abs(det - 1.0) > kOrthogonalityTolerance) {
    throw DomainError(std::string(what) + ": determinant " + std::to_string(det) + " != +1");
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double Quaternion::norm() const { return std::sqrt(norm2()); }

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : UnitQuaternion(Quaternion{w, x, y, z}) {}

UnitQuaternion::UnitQuaternion(const Quaternion& q) : q_(q) {
  check_finite(q, "UnitQuaternion");
  if (std::abs(q.norm2() - 1.0) > kUnitTolerance) {
    throw DomainError("UnitQuaternion: |q|^2 = " + std::to_string(q.norm2()) + " is not 1");
  }
}

UnitQuaternion UnitQuaternion::normalize(const Quaternion& q) {
  check_finite(q, "UnitQuaternion::normalize");
  const double n = q.norm();
  if (n == 0.0) {
    throw DomainError("UnitQuaternion::normalize: zero quaternion");
  }
  return from_trusted(q * (1.0 / n));
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  return normalize(q_ * o.q_);
}

PointS2::PointS2(double n1, double n2, double n3) : PointS2(Eigen::Vector3d(n1, n2, n3)) {}

PointS2::PointS2(const Eigen::Vector3d& n) : n_(n) {
  if (!n.allFinite() || std::abs(n.squaredNorm() - 1.0) > kUnitTolerance) {
    throw DomainError("PointS2: vector is not of unit length");
  }
}

PointS2 PointS2::normalize(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw DomainError("PointS2::normalize: zero or non-finite vector");
  }
  PointS2 p;
  p.n_ = v / n;
  return p;
}

PointS2 PointS2::operator-() const {
  PointS2 p;
  p.n_ = -n_;
  return p;
}

Rot3::Rot3(const Eigen::Matrix3d& m) : m_(m) { check_rotation(m, "Rot3"); }

Rot4::Rot4(const Eigen::Matrix4d& m) : m_(m) { check_rotation(m, "Rot4"); }

Eigen::Matrix4d left_multiplication_matrix(const Quaternion& q) {
  Eigen::Matrix4d m;
  // clang-format off
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w, -q.z,  q.y,
       q.y,  q.z,  q.w, -q.x,
       q.z, -q.y,  q.x,  q.w;
  // clang-format on
  return m;
}

Eigen::Matrix4d right_multiplication_matrix(const Quaternion& q) {
  Eigen::Matrix4d m;
  // clang-format off
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w,  q.z, -q.y,
       q.y, -q.z,  q.w,  q.x,
       q.z,  q.y, -q.x,  q.w;
  // clang-format on
  return m;
}

Rot3 rho(const UnitQuaternion& u) {
  const Quaternion& q = u.q();
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Eigen::Matrix3d r;
  // clang-format off
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
       2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y);
  // clang-format on
  return Rot3(r);
}

UnitQuaternion pow_m(int m, const UnitQuaternion& p) {
  if (m <= 0) {
    throw DomainError("pow_m: degree " + std::to_string(m) + " is unsupported (need m >= 1)");
  }
  if (m == 1) {
    return p;
  }
  Complex w1 = p.z1();
  for (int k = 1; k < m; ++k) {
    w1 *= p.z1();
  }
  return UnitQuaternion::normalize(Quaternion::from_complex(w1, p.z2()));
}

PointS2 eval_N(const Rot3& r, const PointS2& n) { return PointS2::normalize(r * n.vector()); }

std::array<Quaternion, 3> tangent_frame(const UnitQuaternion& q) {
  return {Quaternion::i() * q.q(), Quaternion::j() * q.q(), Quaternion::k() * q.q()};
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const PointS2& p) {
  const Eigen::Vector3d& n = p.vector();
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::abs(n[a]) < std::abs(n[axis])) {
      axis = a;
    }
  }
  Eigen::Vector3d t1 = Eigen::Vector3d::Unit(axis);
  t1 -= t1.dot(n) * n;
  t1.normalize();
  Eigen::Vector3d t2 = n.cross(t1);
  return {t1, t2};
}

Eigen::Vector3d stereographic(const UnitQuaternion& p, const UnitQuaternion& pole) {
  const double c = dot(p.q(), pole.q());
  if ((p.vector() - pole.vector()).norm() < kStereographicPoleTolerance) {
    throw ProjectionError("stereographic: point coincides with the projection pole");
  }
  const auto frame = tangent_frame(pole);
  const double scale = 1.0 / (1.0 - c);
  return {dot(p.q(), frame[0]) * scale, dot(p.q(), frame[1]) * scale,
          dot(p.q(), frame[2]) * scale};
}

UnitQuaternion inverse_stereographic(const Eigen::Vector3d& y, const UnitQuaternion& pole) {
  const double s = y.squaredNorm();
  const auto frame = tangent_frame(pole);
  const double a = (s - 1.0) / (s + 1.0);
  const double b = 2.0 / (s + 1.0);
  return UnitQuaternion::normalize(pole.q() * a + frame[0] * (b * y[0]) + frame[1] * (b * y[1]) +
                                   frame[2] * (b * y[2]));
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  return Rng(seq);
}

UnitQuaternion sample_s3(Rng& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    const Quaternion q{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (q.norm2() > 1e-20) {
      return UnitQuaternion::normalize(q);
    }
  }
}

PointS2 sample_s2(Rng& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    const Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
    if (v.squaredNorm() > 1e-20) {
      return PointS2::normalize(v);
    }
  }
}

}  // namespace regulink
