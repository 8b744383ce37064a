#include "regulink/so4_isoclinic.hpp"

#include <array>
#include <cmath>

#include <Eigen/SVD>

namespace regulink {

namespace {

const std::array<Eigen::Matrix4d, 16>& basis_matrices() {
  static const std::array<Eigen::Matrix4d, 16> basis = [] {
    const std::array<Quaternion, 4> e{Quaternion::one(), Quaternion::i(), Quaternion::j(),
                                      Quaternion::k()};
    std::array<Eigen::Matrix4d, 16> out;
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        out[4 * k + l] = left_multiplication_matrix(e[k]) * right_multiplication_matrix(e[l].conj());
      }
    }
    return out;
  }();
  return basis;
}

UnitQuaternion closest_sign(const UnitQuaternion& value, const UnitQuaternion& reference) {
  return dot(value.q(), reference.q()) < 0.0 ? -value : value;
}

}  // namespace

Rot4 IsoclinicPair::matrix() const { return rotation_from_pair(left, right); }

Rot4 rotation_from_pair(const UnitQuaternion& left, const UnitQuaternion& right) {
  return Rot4(left_multiplication_matrix(left.q()) * right_multiplication_matrix(right.q().conj()));
}

Eigen::Matrix4d isoclinic_gamma(const Eigen::Matrix4d& a) {
  const auto& basis = basis_matrices();
  Eigen::Matrix4d gamma;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      gamma(k, l) = a.cwiseProduct(basis[4 * k + l]).sum() / 4.0;
    }
  }
  return gamma;
}

IsoclinicPair isoclinic_split(const Rot4& a, const std::optional<IsoclinicPair>& align_with) {
  const Eigen::Matrix4d gamma = isoclinic_gamma(a.matrix());
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(gamma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector4d left = svd.matrixU().col(0);
  Eigen::Vector4d right = svd.matrixV().col(0);
  // Gamma = left right^T exactly, so sigma_1 = 1 and u, v carry the same sign.
  if (left.dot(gamma * right) < 0.0) {
    right = -right;
  }
  double flip;
  if (align_with) {
    flip = left.dot(align_with->left.vector()) + right.dot(align_with->right.vector());
  } else {
    Eigen::Index largest = 0;
    left.cwiseAbs().maxCoeff(&largest);
    flip = left[largest];
  }
  if (flip < 0.0) {
    left = -left;
    right = -right;
  }
  return {UnitQuaternion::normalize(left), UnitQuaternion::normalize(right)};
}

IsoclinicPair isoclinic_split(const Eigen::Matrix4d& a,
                              const std::optional<IsoclinicPair>& align_with) {
  return isoclinic_split(Rot4(a), align_with);
}

SphereMap left_factor_map(const SO4Map& f) {
  return SphereMap(
      "left(" + f.name() + ")", [f](const UnitQuaternion& p) { return isoclinic_split(f(p)).left; },
      {}, closest_sign);
}

SphereMap right_factor_map(const SO4Map& f) {
  return SphereMap(
      "right(" + f.name() + ")",
      [f](const UnitQuaternion& p) { return isoclinic_split(f(p)).right; }, {}, closest_sign);
}

PairDegrees pair_degrees(const SO4Map& f, long long samples, std::uint64_t seed,
                         const DegreeOptions& options) {
  return {degree(left_factor_map(f), samples, seed, options),
          degree(right_factor_map(f), samples, seed, options)};
}

SphereMap evaluation_map(const SO4Map& f) {
  return SphereMap("ev(" + f.name() + ")", [f](const UnitQuaternion& p) {
    return UnitQuaternion::normalize(Eigen::Vector4d(f(p).matrix().col(0)));
  });
}

Rot4 j4(const Rot3& r) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.bottomRightCorner<3, 3>() = r.matrix();
  return Rot4(m);
}

SO4Map j4_map(const SO3Map& r) {
  return SO4Map("j4 o " + r.name(), [r](const UnitQuaternion& p) { return j4(r(p)); });
}

SO4Map left_multiplication_family() {
  return SO4Map("left-mult", [](const UnitQuaternion& p) {
    return Rot4(left_multiplication_matrix(p.q()));
  });
}

SO4Map constant_so4_map(const Rot4& value) {
  return SO4Map(
      "constant", [value](const UnitQuaternion&) { return value; },
      [](const UnitQuaternion&) { return SO4Map::Columns::Zero().eval(); });
}

}  // namespace regulink
