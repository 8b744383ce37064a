#pragma once

// SO(4) = (S^3 x S^3) / {+-1}: every A in SO(4) acts as x -> qL x conj(qR).
// Pair degrees of maps S^3 -> SO(4) give the splitting
// pi_3(SO(4)) = pi_3(S^3) + pi_3(SO(3)).

#include <cstdint>
#include <optional>

#include "regulink/integer_estimate.hpp"
#include "regulink/invariants.hpp"
#include "regulink/map_handle.hpp"

namespace regulink {

inline constexpr double kIsoclinicTolerance = 1e-9;

struct IsoclinicPair {
  UnitQuaternion left;
  UnitQuaternion right;

  // Matrix of x -> left x conj(right).
  Rot4 matrix() const;
  IsoclinicPair negated() const { return {-left, -right}; }
};

// Matrix of x -> qL x conj(qR).
Rot4 rotation_from_pair(const UnitQuaternion& left, const UnitQuaternion& right);

// Recovers (qL, qR) from the rank-one array Gamma(A) = qL qR^T (coordinates).
// Without a reference the representative whose largest |left| coordinate is
// positive is returned; with one, the representative with a non-negative
// summed dot product against it.
IsoclinicPair isoclinic_split(const Rot4& a,
                              const std::optional<IsoclinicPair>& align_with = std::nullopt);

// Validates an arbitrary 4x4 matrix first (DomainError for det < 0 or a
// non-orthogonal input).
IsoclinicPair isoclinic_split(const Eigen::Matrix4d& a,
                              const std::optional<IsoclinicPair>& align_with = std::nullopt);

// The 4x4 array Gamma(A) with Gamma_kl = <A, B_kl> / 4, B_kl the matrix of
// x -> e_k x conj(e_l).
Eigen::Matrix4d isoclinic_gamma(const Eigen::Matrix4d& a);

struct PairDegrees {
  IntegerEstimate a;  // degree of q -> qL(q)
  IntegerEstimate b;  // degree of q -> qR(q)

  long long s3_component() const { return a.rounded - b.rounded; }
  long long so3_component() const { return b.rounded; }
  // Stable class in pi_3(SO(5)) = Z: left multiplication (1, 0) -> 1,
  // j4 o rho (1, 1) -> 2.
  long long stable_class() const { return a.rounded + b.rounded; }
  int mod2() const { return static_cast<int>(((stable_class() % 2) + 2) % 2); }
  bool accepted() const { return a.accepted && b.accepted; }
};

// Locally sign-aligned lifts q -> qL(F(q)) and q -> qR(F(q)). Each
// finite-difference stencil is aligned to its center value.
SphereMap left_factor_map(const SO4Map& f);
SphereMap right_factor_map(const SO4Map& f);

PairDegrees pair_degrees(const SO4Map& f, long long samples, std::uint64_t seed,
                         const DegreeOptions& options = {});

// q -> F(q) e1, i.e. the first column of F(q) as a point of S^3. For
// F = (qL, qR) this is qL conj(qR), whose degree is a - b.
SphereMap evaluation_map(const SO4Map& f);

// j4: SO(3) -> SO(4), R -> diag(1, R). j4 o rho(q) is x -> q x conj(q).
Rot4 j4(const Rot3& r);
SO4Map j4_map(const SO3Map& r);

// q -> matrix of x -> q x; pair class (1, 0).
SO4Map left_multiplication_family();
SO4Map constant_so4_map(const Rot4& value);

}  // namespace regulink
