#include "regulink/named_maps.hpp"

#include <string>

namespace regulink {

namespace {

Quaternion quat(const Eigen::Vector4d& v) { return Quaternion::from_vector(v); }

}  // namespace

SphereMap identity_map() {
  return SphereMap(
      "identity", [](const UnitQuaternion& p) { return p; },
      [](const UnitQuaternion& p) {
        return SphereMap::Columns(ManifoldTraits<UnitQuaternion>::frame(p));
      });
}

SphereMap antipodal_map() {
  return SphereMap(
      "antipodal", [](const UnitQuaternion& p) { return -p; },
      [](const UnitQuaternion& p) {
        return SphereMap::Columns(-ManifoldTraits<UnitQuaternion>::frame(p));
      });
}

SphereMap constant_sphere_map(const UnitQuaternion& value) {
  return SphereMap(
      "constant", [value](const UnitQuaternion&) { return value; },
      [](const UnitQuaternion&) { return SphereMap::Columns::Zero().eval(); });
}

S2Map constant_s2_map(const PointS2& value) {
  return S2Map(
      "constant", [value](const UnitQuaternion&) { return value; },
      [](const UnitQuaternion&) { return S2Map::Columns::Zero().eval(); });
}

SO3Map constant_so3_map(const Rot3& value) {
  return SO3Map(
      "constant", [value](const UnitQuaternion&) { return value; },
      [](const UnitQuaternion&) { return SO3Map::Columns::Zero().eval(); });
}

SphereMap rotation_map(const UnitQuaternion& a, const UnitQuaternion& b) {
  return SphereMap(
      "rotation", [a, b](const UnitQuaternion& p) { return a * p * b; },
      [a, b](const UnitQuaternion& p) {
        const auto frame = tangent_frame(p);
        SphereMap::Columns out;
        for (int k = 0; k < 3; ++k) {
          out.col(k) = (a.q() * frame[k] * b.q()).vector();
        }
        return out;
      });
}

SphereMap pow_map(int m) {
  // Validate eagerly so that a bad degree fails at construction.
  (void)pow_m(m, UnitQuaternion::identity());
  return SphereMap(
      "pow:" + std::to_string(m), [m](const UnitQuaternion& p) { return pow_m(m, p); },
      [m](const UnitQuaternion& p) {
        const Complex z1 = p.z1();
        const Complex z2 = p.z2();
        Complex z1_pow_m1(1.0, 0.0);
        for (int k = 1; k < m; ++k) {
          z1_pow_m1 *= z1;
        }
        const Eigen::Vector4d g = Quaternion::from_complex(z1_pow_m1 * z1, z2).vector();
        const double n = g.norm();
        const auto frame = tangent_frame(p);
        SphereMap::Columns out;
        for (int k = 0; k < 3; ++k) {
          const Eigen::Vector4d dg =
              Quaternion::from_complex(static_cast<double>(m) * z1_pow_m1 * frame[k].z1(),
                                       frame[k].z2())
                  .vector();
          out.col(k) = dg / n - g * (g.dot(dg) / (n * n * n));
        }
        return out;
      });
}

SphereMap pointwise_product(const SphereMap& f, const SphereMap& g) {
  SphereMap::DifferentialFn differential;
  if (f.has_analytic_differential() && g.has_analytic_differential()) {
    differential = [f, g](const UnitQuaternion& p) {
      const Quaternion fp = f(p).q();
      const Quaternion gp = g(p).q();
      const auto df = f.analytic_differential()(p);
      const auto dg = g.analytic_differential()(p);
      SphereMap::Columns out;
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector4d dfk = df.col(k);
        const Eigen::Vector4d dgk = dg.col(k);
        out.col(k) = (quat(dfk) * gp + fp * quat(dgk)).vector();
      }
      return out;
    };
  }
  return SphereMap(
      f.name() + " * " + g.name(), [f, g](const UnitQuaternion& p) { return f(p) * g(p); },
      std::move(differential));
}

SO3Map rho_map() {
  return SO3Map(
      "rho", [](const UnitQuaternion& p) { return rho(p); },
      [](const UnitQuaternion& p) {
        // rho(exp(s e_a) p) = rho(exp(s e_a)) rho(p): rotation by 2s about axis a.
        const Eigen::Matrix3d r = rho(p).matrix();
        SO3Map::Columns out;
        for (int a = 0; a < 3; ++a) {
          Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
          const int b = (a + 1) % 3;
          const int c = (a + 2) % 3;
          e(c, b) = 2.0;
          e(b, c) = -2.0;
          const Eigen::Matrix3d d = e * r;
          out.col(a) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(d.data());
        }
        return out;
      });
}

SO3Map mu_m(int m) { return compose(rho_map(), pow_map(m), "mu:" + std::to_string(m)); }

S2Map eval_N_map(const SO3Map& r, const PointS2& n) {
  S2Map::DifferentialFn differential;
  if (r.has_analytic_differential()) {
    differential = [r, n](const UnitQuaternion& p) {
      const auto dr = r.analytic_differential()(p);
      S2Map::Columns out;
      for (int k = 0; k < 3; ++k) {
        const Eigen::Matrix<double, 9, 1> col = dr.col(k);
        out.col(k) = Eigen::Map<const Eigen::Matrix3d>(col.data()) * n.vector();
      }
      return out;
    };
  }
  return S2Map(
      "eval_N o " + r.name(), [r, n](const UnitQuaternion& p) { return eval_N(r(p), n); },
      std::move(differential));
}

S2Map hopf_map() {
  return S2Map(
      "hopf", [](const UnitQuaternion& p) { return eval_N(rho(p), default_N()); },
      [](const UnitQuaternion& p) {
        const Eigen::Vector3d h = rho(p).matrix().col(0);
        S2Map::Columns out;
        for (int a = 0; a < 3; ++a) {
          out.col(a) = 2.0 * Eigen::Vector3d::Unit(a).cross(h);
        }
        return out;
      });
}

RestrictedAlpha alpha_m_restricted(int m, const PointS2& n) {
  return {identity_map(), eval_N_map(mu_m(m), n)};
}

}  // namespace regulink
