#include <doctest.h>

#include <cstdlib>

#include "regulink/invariants.hpp"
#include "regulink/named_maps.hpp"
#include "regulink/parallel.hpp"

using namespace regulink;

TEST_CASE("degree of identity, antipodal and pow_m") {
  CHECK(degree(identity_map(), 20'000, 1).rounded == 1);
  CHECK(degree(identity_map(), 20'000, 1).standard_error < 1e-12);
  CHECK(degree(antipodal_map(), 20'000, 1).rounded == 1);
  for (int m = 1; m <= 4; ++m) {
    CAPTURE(m);
    const auto e = degree(pow_map(m), 200'000, 7);
    CHECK(e.rounded == m);
    CHECK(e.accepted);
    CHECK(e.standard_error < 0.05);
  }
  CHECK(degree(constant_sphere_map(UnitQuaternion::identity()), 20'000, 1).rounded == 0);
}

TEST_CASE("degree is invariant under rotation precomposition") {
  Rng rng = make_rng(31);
  for (int n = 0; n < 3; ++n) {
    const auto a = sample_s3(rng), b = sample_s3(rng);
    for (int m = 2; m <= 3; ++m) {
      CHECK(degree(compose(pow_map(m), rotation_map(a, b)), 200'000, 8).rounded == m);
    }
  }
}

TEST_CASE("degree is deterministic across worker counts") {
  DegreeOptions one, four;
  one.workers = 1;
  four.workers = 4;
  const auto a = degree(pow_map(3), 50'000, 9, one);
  const auto b = degree(pow_map(3), 50'000, 9, four);
  CHECK(a.raw == b.raw);
  CHECK(a.standard_error == b.standard_error);
  CHECK(degree(pow_map(3), 50'000, 10, one).raw != a.raw);
}

TEST_CASE("degree gates") {
  CHECK_THROWS_AS(degree(identity_map(), 9'999, 1), DomainError);
  DegreeOptions soft;
  soft.throw_on_inconclusive = false;
  // pow_8 at 10^4 samples has a standard error near 0.1.
  const auto loose = degree(pow_map(8), 10'000, 2, soft);
  CHECK_FALSE(loose.accepted);
  CHECK(loose.rounded == 8);
  try {
    degree(pow_map(8), 10'000, 2);
    FAIL("expected InconclusiveEstimate");
  } catch (const InconclusiveEstimate& e) {
    CHECK(e.estimate().raw == loose.raw);
  }
}

TEST_CASE("Hopf invariant of eval_N o mu_m is m") {
  for (int m = 1; m <= 3; ++m) {
    CAPTURE(m);
    for (const auto& [v1, v2] : regular_value_pairs(3, 100 + m)) {
      const auto h = hopf_invariant(eval_N_map(mu_m(m)), v1, v2);
      CHECK(h.rounded == m);
      CHECK(h.residual < 0.01);
    }
  }
  CHECK(hopf_sign_calibration() == 1);
  CHECK(hopf_invariant(hopf_map(), default_N(), -default_N()).rounded == 1);
}

TEST_CASE("Hopf invariant is independent of the regular values") {
  const auto f = eval_N_map(mu_m(2));
  Rng rng = make_rng(32);
  for (int n = 0; n < 4; ++n) {
    const PointS2 v1 = sample_s2(rng), v2 = sample_s2(rng);
    if ((v1.vector() - v2.vector()).norm() < 0.3) {
      continue;
    }
    CHECK(hopf_invariant(f, v1, v2).rounded == 2);
  }
}

TEST_CASE("Hopf invariant rejects critical values") {
  const auto f = constant_s2_map(default_N());
  CHECK_THROWS_AS(hopf_invariant(f, default_N(), -default_N()), NotRegularError);
}

TEST_CASE("traced Hopf fibers match the closed form") {
  const auto details = hopf_invariant_details(hopf_map(), default_N(), -default_N());
  REQUIRE(details.fiber1.size() == 1);
  REQUIRE(details.fiber2.size() == 1);
  CHECK(hopf_fiber_deviation(details.fiber1[0], default_N()) < 1e-5);
  CHECK(hopf_fiber_deviation(details.fiber2[0], -default_N()) < 1e-5);
  const auto c = hopf_fiber_circle(-default_N(), 64);
  CHECK(c.size() == 64);
  for (const auto& p : c.vertices) {
    CHECK((hopf_map()(p).vector() + default_N().vector()).norm() < 1e-14);
  }
}

TEST_CASE("so3_class") {
  CHECK(so3_class(mu_m(1)).rounded == 1);
  CHECK(so3_class(mu_m(2)).rounded == 2);
  CHECK(so3_class(rho_map()).rounded == 1);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  setenv("REGULINK_WORKERS", "5", 1);
  CHECK(resolve_workers() == 5);
  CHECK(resolve_workers(2) == 2);
  unsetenv("REGULINK_WORKERS");
  CHECK(resolve_workers() >= 1);
}
