#include <doctest.h>

#include "psitrop/genus_one.hpp"

using namespace psitrop;

namespace {

// Closed forms with L = lcm(2,d), f = (d-2)!.
Rat source_closed(long d) {
  Int L = lcm(2, d), f = factorial(d - 2);
  return Rat(2 * L * f * f * (d - 1) * (d + 1));
}

}  // namespace

TEST_SUITE("genus-one-families") {
  TEST_CASE("psi on the family C^a has degree a") {
    for (int a : {-2, 0, 1, 4}) {
      EllipticFamilySpec s{a};
      check_cocycle(psi_cocycle(s));
      CHECK(psi_pullback_degree(s) == a);
    }
  }

  TEST_CASE("isomorphism fan") {
    auto f = isom_fan(2, 5);
    CHECK(f.fan.rays.size() == 4);
    for (const auto& w : f.fan.weights) CHECK(w == 2);
    CHECK(isom_fan(0, 2).fan.weights[0] == 2);
  }

  TEST_CASE("degrees for d = 3") {
    CHECK(source_degree(3) == 96);
    CHECK(branch_degree(3) == 24);
    CHECK(psi_covers_degree(3) == 8);
  }

  TEST_CASE("source degree against the closed form") {
    for (int d = 2; d <= 8; ++d) CHECK(source_degree(d) == source_closed(d));
  }

  TEST_CASE("the twelfth") {
    for (int d = 2; d <= 8; ++d) CHECK(psi_covers_degree(d) / source_degree(d) == Rat(1, 12));
  }

  TEST_CASE("class III source contribution does not depend on a") {
    for (int d = 2; d <= 7; ++d)
      for (const auto& r : cover_class_table(d))
        if (r.cls == CoverClass::III) CHECK(r.weight * r.source_slope == Rat(lcm(2, d) * d * factorial(d - 2) * factorial(d - 2)));
  }

  TEST_CASE("branch totals agree on all three rays") {
    auto t = branch_ray_totals(5);
    CHECK(t[0] == t[1]);
    CHECK(t[1] == t[2]);
  }

  TEST_CASE("representative covers satisfy Riemann-Hurwitz") {
    for (int d = 2; d <= 6; ++d) {
      CHECK(local_rh_check(representative_cover(CoverClass::I, d)).ok());
      if (d >= 3) CHECK(local_rh_check(representative_cover(CoverClass::IV, d)).ok());
      if (d >= 4) CHECK(local_rh_check(representative_cover(CoverClass::II, d)).ok());
      for (int a = 1; a < d; ++a) CHECK(local_rh_check(representative_cover(CoverClass::III, d, a)).ok());
    }
  }

  TEST_CASE("a broken cover is caught") {
    auto c = representative_cover(CoverClass::I, 3);
    c.local_degree[0] = 2;
    CHECK_FALSE(local_rh_check(c).ok());
  }

  TEST_CASE("degree below two is rejected") { CHECK_THROWS_AS(cover_class_table(1), DomainError); }
}
