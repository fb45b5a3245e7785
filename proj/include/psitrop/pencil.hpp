#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psitrop/lattice.hpp"

namespace psitrop {

struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedScope : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tree of the source curve with marks, coordinates (x, y, l_1, ..., l_k).
struct ParamStableMapType {
  struct Edge {
    std::string id;
    IntVec disp;  // primitive direction times weight
    int len = 1;  // index k of l_k
  };
  struct Mark {
    std::string id;
    std::vector<std::string> path;  // edges from the root to the mark
  };
  std::vector<std::string> root_vars{"x", "y"};
  std::vector<Edge> edges;
  std::vector<Mark> marks;

  int num_lengths() const;
  int edge_index(const std::string& id) const;  // -1 if absent
};

ParamStableMapType param_type_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ParamStableMapType& t);
ParamStableMapType load_param_type(const std::filesystem::path& file);

IntMatrix evaluation_matrix(const ParamStableMapType& t);
Int edge_multiplicity(const ParamStableMapType& t);

// Source type as a graph; bounded edges may close cycles. Each edge has its own
// length, marks sit at vertices.
struct SourceMapType {
  struct Edge {
    int tail = 0, head = 0;
    IntVec disp;
  };
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<int> mark_vertex;
};

// Vertices are the endpoints of paths; every edge gets its own length.
SourceMapType source_of(const ParamStableMapType& t);
// Lattice of (x, y, l) satisfying the cycle conditions, as columns.
IntMatrix cone_lattice(const SourceMapType& s);
// gcd of maximal minors of ev on the cone lattice; independent of coordinates.
Int intrinsic_multiplicity(const SourceMapType& s);

struct TreeChoice {
  int root = 0;
  std::vector<int> tree_edges;
  bool unimodular = false;  // tree lengths are coordinates on the cone lattice
  ParamStableMapType type;
};
std::vector<TreeChoice> tree_choices(const SourceMapType& s);

// Multiplicity-weighted count of genus-0 floor diagrams of degree d;
// reversed counts the dual diagrams (all orientations flipped).
Int floor_count(int d, int g = 0, bool reversed = false);

struct PencilReport {
  Int floor_count = 0;
  Int labeling_factor = 0;
  Int covering_degree = 0;
  struct MarkEntry {
    int mark = 0;
    std::string fixture;
    Int points = 0;
    Int multiplicity = 0;
    Int psi_degree = 0;
  };
  std::vector<MarkEntry> marks;
  Rat ratio;  // psi_degree / (2 covering_degree), common to all marks
  bool consistent = false;
};

// The corpus directory holds corpus.json naming one fixture per mark.
PencilReport pencil_degrees(const std::filesystem::path& corpus);
// PSITROP_FIXTURES if set, else the directory baked in at build time.
std::filesystem::path default_corpus();
nlohmann::json to_json(const PencilReport& r);

}  // namespace psitrop
