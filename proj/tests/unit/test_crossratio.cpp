#include <doctest.h>

#include <set>

#include "psitrop/crossratio.hpp"
#include "psitrop/moduli.hpp"

using namespace psitrop;

namespace {

StableGraph star(int n) {
  StableGraph g;
  g.add_vertex(0);
  for (int l = 1; l <= n; ++l) g.add_leg(0, l);
  return g;
}

// Specialization of the 4-star with legs 1,2 on one side.
Specialization top_12(const StableGraph& g) {
  for (auto& s : tree_specializations(g, 1)) {
    if (s.contracted.size() != 1) continue;
    const auto& f = s.fine;
    if (f.flag_vertex[0] == f.flag_vertex[1]) return s;
  }
  FAIL("no such specialization");
  return {};
}

}  // namespace

TEST_SUITE("cross-ratio") {
  TEST_CASE("the M0,4 picture") {
    auto g = star(4);
    auto sp = top_12(g);
    std::map<int, Rat> len{{sp.contracted[0], Rat(7)}};
    // flags 0..3 are legs 1..4
    CHECK(evaluate(vertex_datum(g, 0, 2, 1, 3), g, sp, len) == 7);
    CHECK(evaluate(vertex_datum(g, 0, 1, 2, 3), g, sp, len) == 0);
    CHECK(evaluate(vertex_datum(g, 0, 3, 1, 2), g, sp, len) == 7);
  }

  TEST_CASE("trivial specialization evaluates to zero") {
    auto g = star(4);
    auto specs = tree_specializations(g, 0);
    REQUIRE(specs.size() == 1);
    CHECK(lift_coefficients(vertex_datum(g, 0, 2, 1, 3), g, specs[0]).empty());
  }

  TEST_CASE("specialization counts") {
    CHECK(tree_specializations(star(4), 1).size() == 4);
    CHECK(tree_specializations(star(5), 2).size() == 26);
  }

  TEST_CASE("distance pull-back has half-integer coefficients") {
    auto g = star(5);
    auto f = pullback_to_distance(g, vertex_datum(g, 0, 3, 2, 1), 5);
    auto m = build_m0n(5);
    // ((1,4),(3,2)) = (d_12 + d_34 - d_13 - d_24) / 2
    RatVec want(m.pairs.size(), 0);
    want[m.pair_index(1, 2)] = Rat(1, 2);
    want[m.pair_index(3, 4)] = Rat(1, 2);
    want[m.pair_index(1, 3)] = Rat(-1, 2);
    want[m.pair_index(2, 4)] = Rat(-1, 2);
    CHECK(f == want);
  }

  TEST_CASE("degenerate data are rejected") {
    auto g = star(4);
    CHECK_THROWS_AS(vertex_datum(g, 0, 0, 1, 2), DomainError);
  }

  TEST_CASE("edge data on a two-vertex graph") {
    StableGraph g;
    int u = g.add_vertex(0), v = g.add_vertex(0);
    int e = g.add_edge(u, v);
    g.add_leg(u, 1);
    g.add_leg(u, 2);
    g.add_leg(v, 3);
    g.add_leg(v, 4);
    const int out = g.edge_flags[e][0];
    auto legs = [&](int l) { return g.edge_flags[g.leg_of(l)][0]; };
    auto specs = tree_specializations(g, 1);
    REQUIRE(specs.size() == 1);
    std::map<int, Rat> len{{e, Rat(5)}};
    CHECK(evaluate(edge_datum(g, out, legs(1), legs(3), legs(2), legs(4)), g, specs[0], len) == 5);
  }

  TEST_CASE("decomposition into primitive data") {
    auto g = star(5);
    CrossRatioDatum c;
    c.path.start_flag = 0;
    c.path.end_flag = 1;
    c.form.slopes = {{{2, Int(-2)}, {3, Int(1)}, {4, Int(1)}}};
    auto parts = decompose_primitive(g, c);
    Int total = 0;
    for (auto& [k, d] : parts) total += k;
    CHECK(total == 2);
    for (const auto& sp : tree_specializations(g, 2)) {
      std::map<int, Int> sum;
      for (auto& [k, d] : parts)
        for (auto [e, x] : lift_coefficients(d, g, sp)) sum[e] += k * x;
      for (auto it = sum.begin(); it != sum.end();) it = it->second == 0 ? sum.erase(it) : std::next(it);
      CHECK(sum == lift_coefficients(c, g, sp));
    }
  }

  TEST_CASE("json round trip") {
    auto g = star(4);
    auto d = vertex_datum(g, 0, 2, 1, 3);
    auto back = datum_from_json(to_json(d));
    auto sp = top_12(g);
    CHECK(lift_coefficients(back, g, sp) == lift_coefficients(d, g, sp));
  }

  TEST_CASE("lifting through an intermediate type gives the same function") {
    // two-vertex graph, so edge data occur as well
    StableGraph g;
    int u = g.add_vertex(0), v = g.add_vertex(0);
    int e = g.add_edge(u, v);
    for (int l : {1, 2, 3}) g.add_leg(u, l);
    for (int l : {4, 5, 6}) g.add_leg(v, l);
    const int out = g.edge_flags[e][0], in = g.edge_flags[e][1];
    auto U = g.flags_at(u), V = g.flags_at(v);
    std::vector<CrossRatioDatum> data{vertex_datum(g, U[1], U[2], U[3], out), vertex_datum(g, V[0], V[2], V[1], V[3]),
                                      edge_datum(g, out, U[1], V[1], U[2], V[2]),
                                      edge_datum(g, in, V[2], U[3], V[3], U[1])};
    int chains = 0;
    for (const auto& sp : tree_specializations(g, 3)) {
      if (sp.contracted.size() < 2) continue;
      for (int a : sp.contracted) {
        // fine -> mid contracts a, mid -> coarse contracts the rest
        auto mor = contract_edge(sp.fine, a);
        Specialization mid{mor.graph, {}};
        for (int b : sp.contracted)
          if (b != a) mid.contracted.push_back(mor.edge_map[b]);
        if (!(contract_edges(mid.fine, mid.contracted).graph == g)) continue;
        ++chains;
        for (const auto& d : data) {
          auto direct = lift_coefficients(d, g, sp);
          direct.erase(a);
          std::map<int, Int> via;
          for (auto [x, c] : lift_coefficients(d, g, mid))
            for (std::size_t y = 0; y < mor.edge_map.size(); ++y)
              if (mor.edge_map[y] == x) via[static_cast<int>(y)] = c;
          CHECK(direct == via);
        }
      }
    }
    CHECK(chains > 0);
  }
}
