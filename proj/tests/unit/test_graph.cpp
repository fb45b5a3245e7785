#include <doctest.h>

#include "psitrop/graph.hpp"

using namespace psitrop;

namespace {

StableGraph loop_graph(std::vector<int> labels) {
  StableGraph g;
  int v = g.add_vertex(0);
  g.add_edge(v, v);
  for (int l : labels) g.add_leg(v, l);
  return g;
}

StableGraph banana() {
  StableGraph g;
  int u = g.add_vertex(0), v = g.add_vertex(0);
  g.add_edge(u, v);
  g.add_edge(u, v);
  g.add_leg(u, 1);
  g.add_leg(v, 2);
  return g;
}

StableGraph theta() {
  StableGraph g;
  int u = g.add_vertex(0), v = g.add_vertex(0);
  for (int k = 0; k < 3; ++k) g.add_edge(u, v);
  return g;
}

// Two chains on the theta graph generate H_1 = {x : x0+x1+x2 = 0} iff the
// gcd of their 2x2 minors is 1.
bool generates_theta(const Chain& a, const Chain& b) {
  Int g = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) g = gcd(g, Int(a[i] * b[j] - a[j] * b[i]));
  return g == 1;
}

}  // namespace

TEST_SUITE("graph-core") {
  TEST_CASE("genus counts loops and vertex genera") {
    CHECK(genus(loop_graph({1})) == 1);
    CHECK(genus(banana()) == 1);
    StableGraph g;
    g.add_vertex(1);
    g.add_leg(0, 1);
    CHECK(genus(g) == 1);
    CHECK(betti_number(g) == 0);
  }

  TEST_CASE("stability") {
    StableGraph g;
    int v = g.add_vertex(0);
    g.add_leg(v, 1);
    g.add_leg(v, 2);
    auto r = validate(g);
    CHECK_FALSE(r.ok());
    CHECK(r.unstable_vertices == std::vector<int>{0});
    CHECK(validate(loop_graph({1})).ok());
  }

  TEST_CASE("automorphisms") {
    CHECK(automorphisms(loop_graph({1})).size() == 2);
    CHECK(automorphisms(banana()).size() == 2);
    for (const auto& a : automorphisms(banana())) {
      auto b = inverse(a);
      CHECK(compose(a, b).is_identity());
    }
  }

  TEST_CASE("contracting one banana edge gives a loop") {
    auto m = contract_edge(banana(), 0);
    CHECK(isomorphic(m.graph, loop_graph({1, 2})));
    CHECK(m.edge_map[0] == -1);
    CHECK(genus(m.graph) == 1);
  }

  TEST_CASE("contracting a loop raises the vertex genus") {
    auto m = contract_edge(loop_graph({1}), 0);
    CHECK(m.graph.genus[0] == 1);
    CHECK(m.graph.bounded_edges().empty());
  }

  TEST_CASE("primitive cycles generate homology") {
    auto g = banana();
    auto cycles = oriented_primitive_cycles(g);
    CHECK(!cycles.empty());
    CHECK(generates_homology(g, cycles));
  }

  TEST_CASE("rigidifications of a loop") {
    auto r = cycle_rigidifications(loop_graph({1}));
    CHECK(!r.empty());
    for (const auto& c : r) CHECK(c.cycles.size() == 1);
  }

  TEST_CASE("json round trip") {
    auto g = banana();
    CHECK(graph_from_json(to_json(g)) == g);
  }

  TEST_CASE("broken id maps are rejected") {
    auto g = banana();
    g.flag_vertex[0] = 7;
    CHECK_THROWS_AS(check_structure(g), StructuralError);
  }

  TEST_CASE("theta graph") {
    auto g = theta();
    CHECK(validate(g).ok());
    CHECK(genus(g) == 2);
    CHECK(automorphisms(g).size() == 12);
    auto cycles = oriented_primitive_cycles(g);
    CHECK(cycles.size() == 6);
    int brute = 0;
    for (const auto& a : cycles)
      for (const auto& b : cycles)
        if (generates_theta(a, b)) ++brute;
    CHECK(brute == 24);
    CHECK(cycle_rigidifications(g).size() == static_cast<std::size_t>(brute));
  }

  TEST_CASE("one-loop graph has two rigidifications, a tree one") {
    CHECK(cycle_rigidifications(loop_graph({1})).size() == 2);
    StableGraph t;
    t.add_vertex(0);
    for (int l = 1; l <= 3; ++l) t.add_leg(0, l);
    auto r = cycle_rigidifications(t);
    REQUIRE(r.size() == 1);
    CHECK(r[0].cycles.empty());
    CHECK(automorphisms(t).size() == 1);
  }

  TEST_CASE("caterpillar contraction and stretching") {
    StableGraph g;
    int u = g.add_vertex(0), v = g.add_vertex(0);
    int e = g.add_edge(u, v);
    g.add_leg(u, 1);
    g.add_leg(u, 2);
    g.add_leg(v, 3);
    g.add_leg(v, 4);
    auto c = contract_edge(g, e).graph;
    CHECK(c.num_vertices() == 1);
    CHECK(c.valence(0) == 4);
    auto s = stretch_edge(g, e);
    CHECK(genus(s) == genus(g));
    CHECK_FALSE(s.is_bounded(e));
    CHECK_THROWS_AS(contract_edge(g, g.leg_of(1)), DomainError);
  }
}
