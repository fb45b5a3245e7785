#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "psitrop/arith.hpp"

namespace psitrop {

struct StructuralError : DomainError {
  using DomainError::DomainError;
};

// Vertices, flags and edges carry dense integer ids (their index).
// Edges with one flag are legs; every leg is unbounded and carries a mark.
struct StableGraph {
  std::vector<int> genus;                     // per vertex
  std::vector<int> flag_vertex;               // per flag
  std::vector<int> flag_edge;                 // per flag
  std::vector<std::vector<int>> edge_flags;   // per edge, 1 or 2 flags
  std::vector<char> unbounded;                // per edge
  std::map<int, int> marks;                   // label -> leg

  int add_vertex(int g = 0);
  int add_edge(int u, int v);                 // bounded, possibly a loop
  int add_leg(int v, int label);

  std::size_t num_vertices() const { return genus.size(); }
  std::size_t num_flags() const { return flag_vertex.size(); }
  std::size_t num_edges() const { return edge_flags.size(); }
  bool is_leg(int e) const { return edge_flags[e].size() == 1; }
  bool is_bounded(int e) const { return !unbounded[e]; }
  bool is_loop(int e) const;
  int other_flag(int f) const;
  std::vector<int> flags_at(int v) const;
  int valence(int v) const;
  int leg_label(int e) const;                 // -1 if not a leg
  int leg_of(int label) const;
  int vertex_of_label(int label) const;
  std::vector<int> bounded_edges() const;

  bool operator==(const StableGraph&) const = default;
};

struct ValidationReport {
  bool connected = true;
  std::vector<int> unstable_vertices;
  bool ok() const { return connected && unstable_vertices.empty(); }
};

// Throws StructuralError for inconsistent id maps.
ValidationReport validate(const StableGraph& g);
void check_structure(const StableGraph& g);

int genus(const StableGraph& g);
int betti_number(const StableGraph& g);

// Ids of the result relate to the input through the maps; -1 marks deleted items.
struct GraphMorphism {
  StableGraph graph;
  std::vector<int> vertex_map, flag_map, edge_map;
};

GraphMorphism contract_edge(const StableGraph& g, int e);
GraphMorphism contract_edges(const StableGraph& g, std::vector<int> edges);
StableGraph stretch_edge(const StableGraph& g, int e);

struct Automorphism {
  std::vector<int> vertex, flag, edge;
  bool operator==(const Automorphism&) const = default;
  bool is_identity() const;
};

std::vector<Automorphism> automorphisms(const StableGraph& g);
Automorphism compose(const Automorphism& a, const Automorphism& b);  // a after b
Automorphism inverse(const Automorphism& a);
bool isomorphic(const StableGraph& a, const StableGraph& b);

// Integer chains on edges; edge e is oriented from its first flag to its second.
using Chain = std::vector<int>;

std::vector<Chain> oriented_primitive_cycles(const StableGraph& g);
Chain push_chain(const Automorphism& a, const StableGraph& g, const Chain& c);
bool generates_homology(const StableGraph& g, const std::vector<Chain>& cycles);

struct CycleRigidifiedGraph {
  StableGraph base;
  std::vector<Chain> cycles;  // length genus(base); zero chains allowed as padding
};

std::vector<CycleRigidifiedGraph> cycle_rigidifications(const StableGraph& g);

// Induced rigidification on a contraction.
CycleRigidifiedGraph contract_rigidified(const CycleRigidifiedGraph& g, int e);

nlohmann::json to_json(const StableGraph& g);
StableGraph graph_from_json(const nlohmann::json& j);

}  // namespace psitrop
