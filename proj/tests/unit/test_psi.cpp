#include <doctest.h>

#include "psitrop/psi.hpp"

using namespace psitrop;

namespace {

// (n-3)! / prod a_i!
Int multinomial(int n, const std::vector<int>& a) {
  Int r = factorial(n - 3);
  for (int x : a) r /= factorial(x);
  return r;
}

}  // namespace

TEST_SUITE("psi-classes") {
  TEST_CASE("top degrees") {
    for (std::vector<int> e : std::vector<std::vector<int>>{
             {1, 0, 0, 0}, {2, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {3, 0, 0, 0, 0, 0}, {2, 1, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 0}}) {
      const int n = static_cast<int>(e.size());
      CAPTURE(n);
      CHECK(psi_product_degree(n, e) == Rat(multinomial(n, e)));
    }
  }

  TEST_CASE("frozen degrees") {
    CHECK(psi_product_degree(6, {1, 1, 1, 0, 0, 0}) == 6);
    CHECK(psi_product_degree(7, {2, 1, 1, 0, 0, 0, 0}) == 12);
  }

  TEST_CASE("representative of psi_1 on M0,5") {
    auto r = psi_representative(5, 1);
    CHECK(r.fan.cones.size() == 6);
    for (const auto& w : r.fan.weights) CHECK(w == 1);
    CHECK(check_balancing(r.fan).balanced);
  }

  TEST_CASE("gromov products on rays") {
    const int n = 5;
    Split s = label_bit(1) | label_bit(2);
    CHECK(gromov_on_split(s, 3, 1, 2, n) == 1);
    CHECK(gromov_on_split(s, 1, 3, 4, n) == 1);
    CHECK(gromov_on_split(s, 1, 2, 3, n) == 0);
  }

  TEST_CASE("flag choice does not matter") {
    auto m = build_m0n(5);
    for (int i = 1; i <= 5; ++i) CHECK(flag_choice_independent(m, m.fundamental_class(), i));
    CHECK(overlap_linear(m, 1));
  }

  TEST_CASE("dilaton") {
    auto r = dilaton_pushforward(5);
    CHECK(r.matches);
    CHECK(r.fiber_ok);
    CHECK(r.factor == 3);
  }

  TEST_CASE("pull-back on M0,5") {
    auto r = pullback_check(4, 1);
    CHECK(r.ok);
    CHECK(r.fiber_psi == 1);
  }
}
