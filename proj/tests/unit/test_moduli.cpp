#include <doctest.h>

#include <random>

#include "psitrop/moduli.hpp"

using namespace psitrop;

namespace {

long double_factorial(long k) {
  long r = 1;
  for (; k > 1; k -= 2) r *= k;
  return r;
}

// Random trivalent tree: a random top cone of M0,n with random lengths.
MetricGraphPoint random_tree(std::mt19937_64& rng, const M0nFan& m) {
  std::uniform_int_distribution<std::size_t> cone(0, m.top_cones.size() - 1);
  const Cone& c = m.top_cones[cone(rng)];
  MetricGraphPoint p{tree_from_splits(m.n, m.splits_of(c, m.rays)).graph(), {}};
  std::uniform_int_distribution<int> len(1, 9);
  for (int e : p.type.bounded_edges()) {
    Rat l(len(rng), len(rng));
    l.canonicalize();
    p.lengths[e] = l;
  }
  return p;
}

}  // namespace

TEST_SUITE("moduli-fan") {
  TEST_CASE("ray and cone counts") {
    for (int n = 4; n <= 7; ++n) {
      auto m = build_m0n(n);
      CAPTURE(n);
      CHECK(m.rays.size() == static_cast<std::size_t>((1 << (n - 1)) - n - 1));
      CHECK(static_cast<long>(m.top_cones.size()) == double_factorial(2 * n - 5));
      CHECK(m.ambient() == static_cast<std::size_t>(n * (n - 1) / 2 - n));
      CHECK(check_balancing(m.fundamental_class()).balanced);
    }
  }

  TEST_CASE("tree types of M0,5") {
    auto t = all_tree_types(5);
    CHECK(t.size() == 1 + 10 + 15);
  }

  TEST_CASE("split helpers") {
    const int n = 5;
    Split a = label_bit(1) | label_bit(2);
    Split b = label_bit(1) | label_bit(2) | label_bit(3);
    CHECK(is_split(a, n));
    CHECK(compatible(a, b, n));
    CHECK_FALSE(compatible(a, canonical_split(label_bit(2) | label_bit(3), n), n));
    CHECK(canonical_split(label_bit(4) | label_bit(5), n) == b);
    CHECK(forget_split(a, 5, n) == a);
    CHECK(forget_split(label_bit(1) | label_bit(5), 5, n) == 0);
  }

  TEST_CASE("the point of a one-edge tree lies on its ray") {
    auto m = build_m0n(4);
    auto tr = tree_from_splits(4, {label_bit(1) | label_bit(2)});
    MetricGraphPoint p{tr.graph(), {}};
    for (int e : p.type.bounded_edges()) p.lengths[e] = 3;
    check_point(p);
    auto d = distance_coordinates(p, 4);
    auto x = m.point(d.doubled_coords);
    const auto& r = m.rays[m.ray_of_split.at(label_bit(1) | label_bit(2))];
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(x[k] == Rat(r[k]) * 3);
  }

  TEST_CASE("forgetful map sends rays to rays or zero") {
    auto m5 = build_m0n(5), m4 = build_m0n(4);
    auto f = forgetful_map(4);
    CHECK(f.lattice_map.rows() == m4.ambient());
    CHECK(f.lattice_map.cols() == m5.ambient());
    for (std::size_t k = 0; k < m5.rays.size(); ++k) {
      Split s = forget_split(m5.splits[k], 5, 5);
      auto img = f.lattice_map.apply(m5.rays[k]);
      if (s == 0)
        CHECK(is_zero(img));
      else
        CHECK(img == m4.rays[m4.ray_of_split.at(s)]);
    }
  }

  TEST_CASE("four-point functionals span the dual") {
    for (int n = 4; n <= 6; ++n) CHECK(four_point_functionals_span(build_m0n(n)));
  }

  TEST_CASE("small counts") {
    CHECK(build_m0n(4).rays.size() == 3);
    CHECK(build_m0n(4).top_cones.size() == 3);
    CHECK_THROWS_AS(build_m0n(2), DomainError);
  }

  TEST_CASE("star tree has zero distances") {
    StableGraph g;
    g.add_vertex(0);
    for (int l = 1; l <= 5; ++l) g.add_leg(0, l);
    auto d = distance_coordinates(MetricGraphPoint{g, {}}, 5);
    for (const auto& x : d.doubled_coords) CHECK(x == 0);
  }

  TEST_CASE("forgetting a leg on a cherry suppresses the vertex") {
    auto tr = tree_from_splits(4, {label_bit(1) | label_bit(4)});
    MetricGraphPoint p{tr.graph(), {}};
    for (int e : p.type.bounded_edges()) p.lengths[e] = 2;
    auto q = forget_leg(p, 4);
    CHECK(q.type.num_vertices() == 1);
    CHECK(q.type.bounded_edges().empty());
  }

  TEST_CASE("forgetting keeps a surviving split and its length") {
    auto tr = tree_from_splits(5, {label_bit(1) | label_bit(2)});
    MetricGraphPoint p{tr.graph(), {}};
    for (int e : p.type.bounded_edges()) p.lengths[e] = Rat(3, 2);
    auto q = forget_leg(p, 5);
    REQUIRE(q.type.bounded_edges().size() == 1);
    CHECK(splits_of_graph(q.type, 4) == std::vector<Split>{label_bit(1) | label_bit(2)});
    CHECK(q.lengths.begin()->second == Rat(3, 2));
  }

  TEST_CASE("distances commute with forgetting the last leg") {
    std::mt19937_64 rng(7);
    for (int n = 4; n <= 6; ++n) {
      auto f = forgetful_map(n);
      auto m = build_m0n(n), big_fan = build_m0n(n + 1);
      for (int k = 0; k < 100; ++k) {
        auto p = random_tree(rng, big_fan);
        auto big = distance_coordinates(p, n + 1);
        auto small = distance_coordinates(forget_leg(p, n + 1), n);
        RatVec projected(small.doubled_coords.size(), 0);
        for (std::size_t idx = 0; idx < f.pair_projection.size(); ++idx)
          if (f.pair_projection[idx] >= 0) projected[f.pair_projection[idx]] = big.doubled_coords[idx];
        // equal modulo the image of R^n
        CHECK(m.point(projected) == m.point(small.doubled_coords));
      }
    }
  }

  TEST_CASE("atlas cones") {
    StableGraph loop;
    loop.add_vertex(0);
    loop.add_edge(0, 0);
    loop.add_leg(0, 1);
    auto r = cycle_rigidifications(loop);
    REQUIRE(r.size() == 2);
    for (const auto& g : r) {
      auto c = atlas_cone(g);
      CHECK(c.dim() == 1);
      auto face = atlas_face(c, c.coordinates[0]);
      CHECK(face.dim() == 0);
      CHECK(face.type.base.genus[0] == 1);
    }
    auto tree = tree_from_splits(6, {label_bit(1) | label_bit(2), label_bit(1) | label_bit(2) | label_bit(3)});
    auto t = cycle_rigidifications(tree.graph());
    REQUIRE(t.size() == 1);
    CHECK(atlas_cone(t[0]).dim() == 2);
  }
}
