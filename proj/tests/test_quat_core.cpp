#include <doctest.h>

#include <cmath>
#include <numbers>

#include "regulink/named_maps.hpp"
#include "regulink/quat_core.hpp"
#include "support.hpp"

using namespace regulink;

TEST_CASE("Hamilton product table") {
  const auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK((i * j).vector().isApprox(k.vector()));
  CHECK((j * k).vector().isApprox(i.vector()));
  CHECK((k * i).vector().isApprox(j.vector()));
  CHECK((i * i).vector().isApprox(Eigen::Vector4d(-1, 0, 0, 0)));
  CHECK((i * j * k).vector().isApprox(Eigen::Vector4d(-1, 0, 0, 0)));
}

TEST_CASE("complex coordinates q = z1 + z2 j") {
  const Quaternion q = Quaternion::from_complex({0.1, 0.2}, {0.3, 0.4});
  CHECK(q.w == 0.1);
  CHECK(q.x == 0.2);
  CHECK(q.y == 0.3);
  CHECK(q.z == 0.4);
  // z1 + z2 j with z2 j = (y + z i) j = y j + z k
  const Quaternion rebuilt = Quaternion{0.1, 0.2, 0, 0} + Quaternion{0.3, 0.4, 0, 0} * Quaternion::j();
  CHECK(rebuilt.vector().isApprox(q.vector()));
}

TEST_CASE("validated value types") {
  CHECK_THROWS_AS(UnitQuaternion(1.0, 1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(UnitQuaternion::normalize(Quaternion{}), DomainError);
  CHECK_THROWS_AS(UnitQuaternion::normalize(Quaternion{NAN, 0, 0, 0}), DomainError);
  CHECK_NOTHROW(UnitQuaternion(1.0, 0.0, 0.0, 0.0));
  CHECK_THROWS_AS(PointS2(1.0, 1.0, 0.0), DomainError);
  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(Rot3{reflection}, DomainError);
  CHECK_THROWS_AS(Rot3{Eigen::Matrix3d::Identity() * 1.01}, DomainError);
  Eigen::Matrix4d r4 = Eigen::Matrix4d::Identity();
  r4(0, 0) = -1.0;
  CHECK_THROWS_AS(Rot4{r4}, DomainError);
}

TEST_CASE("multiplication matrices") {
  Rng rng = make_rng(11);
  for (int n = 0; n < 50; ++n) {
    const auto a = sample_s3(rng), b = sample_s3(rng);
    CHECK((left_multiplication_matrix(a.q()) * b.vector() - (a.q() * b.q()).vector()).norm() < 1e-14);
    CHECK((right_multiplication_matrix(a.q()) * b.vector() - (b.q() * a.q()).vector()).norm() < 1e-14);
  }
}

TEST_CASE("rho: identity, double cover, explicit rotation") {
  CHECK(rho(UnitQuaternion::identity()).matrix().isApprox(Eigen::Matrix3d::Identity()));
  Rng rng = make_rng(1);
  for (int n = 0; n < 100; ++n) {
    const auto q = sample_s3(rng);
    CHECK((rho(q).matrix() - rho(-q).matrix()).norm() < 1e-14);
  }
  const double t = std::numbers::pi / 4;
  const auto r = rho(UnitQuaternion(std::cos(t), std::sin(t), 0.0, 0.0));
  CHECK((r * Eigen::Vector3d(0, 1, 0) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("rho agrees with conjugation q v conj(q)") {
  Rng rng = make_rng(2);
  for (int n = 0; n < 100; ++n) {
    const auto q = sample_s3(rng);
    const Eigen::Vector3d v(0.3, -1.2, 0.5);
    const Quaternion c = q.q() * Quaternion::pure(v) * q.q().conj();
    CHECK(std::abs(c.w) < 1e-14);
    CHECK((rho(q) * v - c.imaginary()).norm() < 1e-14);
  }
}

TEST_CASE("rho is a homomorphism with det +1") {
  Rng rng = make_rng(3);
  for (int n = 0; n < 1000; ++n) {
    const auto a = sample_s3(rng), b = sample_s3(rng);
    CHECK((rho(a * b).matrix() - rho(a).matrix() * rho(b).matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(rho(a).matrix().determinant() - 1.0) < 1e-10);
  }
}

TEST_CASE("tangent frame (iq, jq, kq) is orthonormal and tangent") {
  Rng rng = make_rng(4);
  for (int n = 0; n < 1000; ++n) {
    const auto q = sample_s3(rng);
    Eigen::Matrix4d m;
    m.col(0) = q.vector();
    const auto f = tangent_frame(q);
    for (int a = 0; a < 3; ++a) {
      m.col(a + 1) = f[a].vector();
    }
    CHECK((m.transpose() * m - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    // Orientation is the same at every point.
    CHECK(m.determinant() > 0.0);
  }
}

TEST_CASE("tangent basis of S^2 is oriented") {
  Rng rng = make_rng(5);
  for (int n = 0; n < 200; ++n) {
    const auto v = sample_s2(rng);
    const auto [t1, t2] = tangent_basis(v);
    CHECK(std::abs(t1.dot(v.vector())) < 1e-14);
    CHECK(std::abs(t1.norm() - 1.0) < 1e-14);
    CHECK((t1.cross(t2) - v.vector()).norm() < 1e-14);
  }
}

TEST_CASE("pow_m") {
  Rng rng = make_rng(6);
  for (int n = 0; n < 100; ++n) {
    const auto p = sample_s3(rng);
    CHECK(test::distance(pow_m(1, p), p) == 0.0);
  }
  for (int m = 1; m <= 4; ++m) {
    for (double t : {0.0, 0.3, 1.7, 3.0, 5.9}) {
      const auto p = pow_m(m, UnitQuaternion(std::cos(t), std::sin(t), 0.0, 0.0));
      CHECK(std::abs(p.w() - std::cos(m * t)) < 1e-14);
      CHECK(std::abs(p.x() - std::sin(m * t)) < 1e-14);
    }
    const UnitQuaternion fixed(0.0, 0.0, 0.6, 0.8);
    CHECK(test::distance(pow_m(m, fixed), fixed) < 1e-15);
  }
  CHECK_THROWS_AS(pow_m(0, UnitQuaternion::identity()), DomainError);
  CHECK_THROWS_AS(pow_m(-2, UnitQuaternion::identity()), DomainError);
  CHECK_THROWS_AS(pow_map(0), DomainError);
}

TEST_CASE("eval_N and the Hopf fibers over N and -N") {
  const PointS2 n = default_N();
  CHECK((eval_N(Rot3::identity(), n).vector() - n.vector()).norm() == 0.0);
  const auto hopf = eval_N_map(mu_m(1));
  for (double t = 0.0; t < 6.28; t += 0.1) {
    CHECK((hopf(UnitQuaternion(std::cos(t), std::sin(t), 0.0, 0.0)).vector() - n.vector()).norm() <
          1e-14);
    CHECK((hopf(UnitQuaternion(0.0, 0.0, std::cos(t), std::sin(t))).vector() + n.vector()).norm() <
          1e-14);
  }
  CHECK(mu_m(3)(UnitQuaternion::identity()).matrix().isApprox(Eigen::Matrix3d::Identity()));
}

TEST_CASE("alpha_m restricted: identity first component, eval_N o mu_m second") {
  const auto alpha = alpha_m_restricted(2);
  Rng rng = make_rng(7);
  for (int n = 0; n < 20; ++n) {
    const auto p = sample_s3(rng);
    const auto [x, y] = alpha(p);
    CHECK(test::distance(x, p) == 0.0);
    CHECK((y.vector() - eval_N(mu_m(2)(p), default_N()).vector()).norm() < 1e-15);
  }
}

TEST_CASE("stereographic projection") {
  Rng rng = make_rng(8);
  const auto pole = sample_s3(rng);
  CHECK(stereographic(-pole, pole).norm() < 1e-15);
  for (int n = 0; n < 100; ++n) {
    const auto p = sample_s3(rng);
    CHECK(test::distance(inverse_stereographic(stereographic(p, pole), pole), p) < 1e-12);
  }
  CHECK_THROWS_AS(stereographic(pole, pole), ProjectionError);
  const auto near = UnitQuaternion::normalize(pole.q() + tangent_frame(pole)[0] * 1e-10);
  CHECK_THROWS_AS(stereographic(near, pole), ProjectionError);
}

TEST_CASE("seeded sampling is reproducible and stream-separated") {
  Rng a = make_rng(42, 3), b = make_rng(42, 3), c = make_rng(42, 4);
  const auto pa = sample_s3(a), pb = sample_s3(b), pc = sample_s3(c);
  CHECK(test::distance(pa, pb) == 0.0);
  CHECK(test::distance(pa, pc) > 0.0);
  // Uniformity: the mean of 20000 samples is near the origin.
  Rng rng = make_rng(9);
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  for (int n = 0; n < 20000; ++n) {
    mean += sample_s3(rng).vector();
  }
  CHECK((mean / 20000).norm() < 0.02);
}
