#include <doctest.h>

#include "psitrop/cycles.hpp"

using namespace psitrop;

namespace {

WeightedFan plane() {
  WeightedFan a;
  a.ambient = 2;
  a.dim = 2;
  a.rays = {{1, 0}, {0, 1}, {-1, -1}};
  a.cones = {{0, 1}, {0, 2}, {1, 2}};
  a.weights = {1, 1, 1};
  return a;
}

// min(x, y, 0)
PLFunction line_function() {
  PLFunction f;
  f.ray_values = {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, -1}, -1}};
  return f;
}

}  // namespace

TEST_SUITE("tropical-cycles") {
  TEST_CASE("corner locus of min(x,y,0) is the standard line") {
    auto line = divisor_intersect(line_function(), plane());
    CHECK(line.dim == 1);
    CHECK(check_balancing(line).balanced);
    CHECK(line.weight_of({{1, 0}}) == 1);
    CHECK(line.weight_of({{0, 1}}) == 1);
    CHECK(line.weight_of({{-1, -1}}) == 1);
    auto point = divisor_intersect(line_function(), line);
    CHECK(degree(point) == 1);
  }

  TEST_CASE("linear functions have empty divisors") {
    PLFunction f;
    f.linear = {Rat(2), Rat(-3)};
    auto d = divisor_intersect(f, plane());
    d.normalize();
    CHECK(d.cones.empty());
  }

  TEST_CASE("serial and parallel kernels agree") {
    PLFunction f = line_function();
    LocalRayValues v = [&](const Cone&, int r) { return f(plane().rays[r]); };
    CHECK(divisor_intersect(v, plane()).same_cycle(divisor_intersect_serial(v, plane())));
  }

  TEST_CASE("an unbalanced fan reports its face") {
    WeightedFan a;
    a.ambient = 2;
    a.dim = 1;
    a.rays = {{1, 0}, {0, 1}};
    a.cones = {{0}, {1}};
    a.weights = {1, 1};
    auto r = check_balancing(a);
    CHECK_FALSE(r.balanced);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].face.empty());
    CHECK(!check_balancing_serial(a).balanced);
  }

  TEST_CASE("push-forward of the line along a projection") {
    auto line = divisor_intersect(line_function(), plane());
    auto p = push_forward(IntMatrix::from_rows({{1, 0}}), line);
    CHECK(check_balancing(p).balanced);
    CHECK(p.weight_of({{1}}) == 1);
    CHECK(p.weight_of({{-1}}) == 1);
  }

  TEST_CASE("refinement keeps the cycle") {
    WeightedFan a;
    a.ambient = 2;
    a.dim = 2;
    a.rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    a.cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    a.weights = {1, 1, 1, 1};
    Fan b{2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}};
    auto r = refine(a, b);
    CHECK(r.cones.size() == 5);
    CHECK(check_balancing(r).balanced);
  }

  TEST_CASE("line bundles on TP^1") {
    for (int a : {-3, 0, 2, 5}) {
      auto c = tp1_bundle(a);
      check_cocycle(c);
      CHECK(c1_from_cocycle(c) == a);
    }
    CHECK(c1_from_cocycle(tensor(tp1_bundle(2), tp1_bundle(-5))) == -3);
  }

  TEST_CASE("json round trip") {
    auto a = plane();
    CHECK(fan_from_json(to_json(a)).same_cycle(a));
  }
}
