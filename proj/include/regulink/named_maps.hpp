#pragma once

// Concrete map handles used throughout: identity, constants, the degree-m
// self-maps, the double cover, mu_m = rho o pow_m, and the restricted
// diffeomorphism alpha_m on S^3 x {N}.

#include <utility>

#include "regulink/map_handle.hpp"

namespace regulink {

SphereMap identity_map();
SphereMap antipodal_map();
SphereMap constant_sphere_map(const UnitQuaternion& value);
S2Map constant_s2_map(const PointS2& value);
SO3Map constant_so3_map(const Rot3& value);

// q -> a q b (an orientation-preserving isometry of S^3).
SphereMap rotation_map(const UnitQuaternion& a, const UnitQuaternion& b);

SphereMap pow_map(int m);

// p -> f(p) g(p), pointwise quaternion product.
SphereMap pointwise_product(const SphereMap& f, const SphereMap& g);

SO3Map rho_map();
SO3Map mu_m(int m);

// p -> R(p) N for an SO(3)-valued map R.
S2Map eval_N_map(const SO3Map& r, const PointS2& n = default_N());

// The Hopf fibration q -> q i conj(q), with analytic differential.
S2Map hopf_map();

// x -> (x, mu_m(x) N): the restriction of alpha_m to S^3 x {N}.
struct RestrictedAlpha {
  SphereMap first;
  S2Map second;

  std::pair<UnitQuaternion, PointS2> operator()(const UnitQuaternion& x) const {
    return {first(x), second(x)};
  }
};

RestrictedAlpha alpha_m_restricted(int m, const PointS2& n = default_N());

}  // namespace regulink
