#pragma once

#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "psitrop/graph.hpp"

namespace psitrop {

// Walk through genus-0 vertices: steps[i] is the flag at v_i through which the
// bounded edge to v_{i+1} is left.
struct ThickenedPath {
  int start_flag = -1;
  std::vector<int> steps;
  int end_flag = -1;
};

// slopes[i] maps flags at the i-th visited vertex to integers; absent means 0.
struct OneFormAlongPath {
  std::vector<std::map<int, Int>> slopes;
};

enum class DatumKind { general, vertex, edge };

struct CrossRatioDatum {
  ThickenedPath path;
  OneFormAlongPath form;
  DatumKind kind = DatumKind::general;
};

// Vertex of the i-th visit.
std::vector<int> visited_vertices(const StableGraph& g, const ThickenedPath& p);
// Throws DomainError when the datum is not valid on g.
void validate_datum(const StableGraph& g, const CrossRatioDatum& c);

// ((f_s,f_e),(f_{-1},f_1)) at one vertex.
CrossRatioDatum vertex_datum(const StableGraph& g, int fs, int fe, int fm, int fp);
// (e,(f_s,f_e),(f_{-1},f_1)) along the edge left through flag `out`.
CrossRatioDatum edge_datum(const StableGraph& g, int out, int fs, int fe, int fm, int fp);

// A finer type together with the bounded edges contracted to reach the coarse type.
struct Specialization {
  StableGraph fine;
  std::vector<int> contracted;
};

// Coefficients of the lifted cross ratio in the edge lengths of the fine type.
std::map<int, Int> lift_coefficients(const CrossRatioDatum& c, const StableGraph& coarse, const Specialization& s);
Rat evaluate(const CrossRatioDatum& c, const StableGraph& coarse, const Specialization& s,
             const std::map<int, Rat>& lengths);

// Fine types obtained by blowing up genus-0 vertices into trees, at most
// max_edges bounded edges in total (the trivial specialization included).
std::vector<Specialization> tree_specializations(const StableGraph& g, int max_edges);

std::vector<std::pair<Int, CrossRatioDatum>> decompose_primitive(const StableGraph& g, const CrossRatioDatum& c);

// Functional on plain leg distances d_ij (pair order i<j lexicographic) whose
// value is the cross ratio; coefficients are +-1/2.
RatVec pullback_to_distance(const StableGraph& star, const CrossRatioDatum& c, int n);

nlohmann::json to_json(const CrossRatioDatum& c);
CrossRatioDatum datum_from_json(const nlohmann::json& j);

}  // namespace psitrop
