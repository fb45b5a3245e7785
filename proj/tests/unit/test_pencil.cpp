#include <doctest.h>

#include <fstream>

#include "psitrop/pencil.hpp"

using namespace psitrop;

namespace {

std::filesystem::path fixtures() { return PSITROP_TEST_FIXTURES; }

// N_e by the WDVV recursion.
Int kontsevich(int e) {
  std::vector<Int> N(e + 1, 0);
  N[1] = 1;
  for (int k = 2; k <= e; ++k)
    for (int a = 1; a < k; ++a) {
      int b = k - a;
      N[k] += N[a] * N[b] * a * a * b * (b * binomial(3 * k - 4, 3 * a - 2) - a * binomial(3 * k - 4, 3 * a - 1));
    }
  return N[e];
}

}  // namespace

TEST_SUITE("stable-maps-pencil") {
  TEST_CASE("toy line") {
    auto t = load_param_type(fixtures() / "toy" / "line.json");
    auto ev = evaluation_matrix(t);
    CHECK(ev.rows() == 4);
    CHECK(ev.cols() == 5);
    CHECK(edge_multiplicity(t) == 1);
  }

  TEST_CASE("scaling displacements") {
    CHECK(edge_multiplicity(load_param_type(fixtures() / "toy" / "line_doubled.json")) == 2);
  }

  TEST_CASE("pencil fixtures") {
    CHECK(edge_multiplicity(load_param_type(fixtures() / "pencil" / "matrixmult.json")) == 1);
    CHECK(edge_multiplicity(load_param_type(fixtures() / "pencil" / "dilation2.json")) == 2);
  }

  TEST_CASE("schema round trip") {
    auto t = load_param_type(fixtures() / "pencil" / "matrixmult.json");
    auto back = param_type_from_json(to_json(t));
    CHECK(evaluation_matrix(back) == evaluation_matrix(t));
    CHECK_THROWS(param_type_from_json(nlohmann::json{{"v", 2}}));
  }

  TEST_CASE("genus-one source with a double edge") {
    SourceMapType s;
    s.num_vertices = 4;
    s.edges = {{0, 1, {1, 0}}, {0, 1, {1, 0}}, {1, 2, {0, 2}}, {2, 3, {2, 0}}};
    s.mark_vertex = {0, 3};
    CHECK(cone_lattice(s).cols() == 5);
    CHECK(intrinsic_multiplicity(s) == 2);
    for (const auto& c : tree_choices(s))
      if (c.unimodular) CHECK(edge_multiplicity(c.type) == 2);
  }

  TEST_CASE("parallel edges of weights 1 and 2") {
    SourceMapType s;
    s.num_vertices = 2;
    s.edges = {{0, 1, {1, 0}}, {0, 1, {2, 0}}};
    s.mark_vertex = {0, 1};
    auto choices = tree_choices(s);
    CHECK(choices.size() == 4);
    int uni = 0;
    for (const auto& c : choices) {
      if (c.unimodular) ++uni;
      CHECK(c.unimodular == (c.tree_edges == std::vector<int>{1}));
    }
    CHECK(uni == 2);
  }

  TEST_CASE("tree choices on a tree source agree with the parametrized type") {
    auto t = load_param_type(fixtures() / "toy" / "line_doubled.json");
    auto s = source_of(t);
    CHECK(intrinsic_multiplicity(s) == 2);
    for (const auto& c : tree_choices(s)) {
      CHECK(c.unimodular);
      CHECK(edge_multiplicity(c.type) == 2);
    }
  }

  TEST_CASE("floor diagrams give Kontsevich's numbers") {
    for (int d = 1; d <= 5; ++d) {
      CAPTURE(d);
      CHECK(floor_count(d) == kontsevich(d));
      CHECK(floor_count(d, 0, true) == floor_count(d));
    }
    CHECK(floor_count(3) == 12);
    CHECK(floor_count(5) == 87304);
    CHECK_THROWS_AS(floor_count(6), UnsupportedScope);
    CHECK_THROWS_AS(floor_count(3, 1), UnsupportedScope);
  }

  TEST_CASE("cubic pencil report") {
    auto r = pencil_degrees(fixtures() / "pencil");
    CHECK(r.floor_count == 12);
    CHECK(r.labeling_factor == 432);
    CHECK(r.covering_degree == 5184);
    CHECK(r.marks.size() == 8);
    for (const auto& m : r.marks) CHECK(m.psi_degree == 432);
    CHECK(r.ratio == Rat(1, 24));
    CHECK(r.consistent);
  }

  TEST_CASE("missing fixtures are named") {
    auto dir = std::filesystem::temp_directory_path() / "psitrop_missing_corpus";
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "corpus.json");
      out << R"({"v":1,"degree":3,"marks":[{"mark":1,"fixture":"absent.json","points":216}]})";
    }
    try {
      pencil_degrees(dir);
      FAIL("expected a configuration error");
    } catch (const ConfigurationError& e) {
      CHECK(std::string(e.what()).find("absent.json") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
  }
}
