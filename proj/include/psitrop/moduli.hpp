#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "psitrop/cycles.hpp"
#include "psitrop/graph.hpp"

namespace psitrop {

// Subset of labels 1..n as a bitmask (label l is bit l-1). A split I|I^c is
// stored by the side containing label 1.
using LabelSet = std::uint32_t;
using Split = LabelSet;

inline LabelSet label_bit(int l) { return LabelSet(1) << (l - 1); }
inline LabelSet all_labels(int n) { return (LabelSet(1) << n) - 1; }
Split canonical_split(LabelSet side, int n);
bool is_split(LabelSet side, int n);  // both sides have at least two labels
bool compatible(Split a, Split b, int n);
std::vector<int> labels_of(LabelSet s);

// Genus-0 tree with legs 1..n built from pairwise compatible splits.
// Vertex 0 carries leg n; every other vertex corresponds to a cluster.
struct SplitTree {
  int n = 0;
  std::vector<Split> edges;                              // bounded edges
  std::vector<int> leg_vertex;                           // index label-1
  std::vector<std::vector<std::pair<int, int>>> adj;     // (neighbour, edge)
  std::size_t num_vertices() const { return adj.size(); }
  // Label sets reachable through each flag at v (legs give singletons).
  std::vector<LabelSet> directions(int v) const;
  int valence(int v) const;
  StableGraph graph() const;  // bounded edge k of the graph is edges[k]
};

SplitTree tree_from_splits(int n, std::vector<Split> splits);
// Splits of the bounded edges of a genus-0 marked graph, in bounded_edges() order.
std::vector<Split> splits_of_graph(const StableGraph& g, int n);

// All types of n-marked stable trees as sorted sets of compatible splits.
std::vector<std::vector<Split>> all_tree_types(int n);

struct M0nFan {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // i<j, lexicographic
  IntMatrix F;                             // quotient by the image of R^n
  std::vector<Split> splits;               // ray order
  std::vector<IntVec> rays;
  std::vector<Cone> top_cones;
  std::map<Split, int> ray_of_split;
  std::map<IntVec, Split> split_of_ray;

  std::size_t ambient() const { return F.rows(); }
  int dim() const { return n - 3; }
  int pair_index(int i, int j) const;
  Fan fan() const;
  WeightedFan fundamental_class(const Rat& w = 1) const;
  Cone cone_of(const std::vector<Split>& s) const;
  std::vector<Split> splits_of(const Cone& c, const std::vector<IntVec>& rays) const;
  // Ambient point of the half-distance vector d/2.
  RatVec point(const RatVec& distances) const;
};

M0nFan build_m0n(int n);

struct MetricGraphPoint {
  StableGraph type;
  std::map<int, Rat> lengths;  // bounded edge -> positive length
};

void check_point(const MetricGraphPoint& p);

// Plain tree distances between the vertices of legs i and j, indexed like M0nFan::pairs.
struct DistanceVector {
  int n = 0;
  RatVec doubled_coords;
};

DistanceVector distance_coordinates(const MetricGraphPoint& p, int n);

// Forgetting leg n+1 from M0,n+1 to M0,n.
struct ForgetfulMap {
  int n = 0;
  IntMatrix lattice_map;             // ambient(n) x ambient(n+1)
  std::vector<int> pair_projection;  // pair index in n+1 -> pair index in n, or -1
};

ForgetfulMap forgetful_map(int n);
MetricGraphPoint forget_leg(const MetricGraphPoint& p, int label);
// Image of a split under forgetting label; 0 when it becomes trivial.
Split forget_split(Split s, int label, int n_before);

// Four-point functionals x_ij + x_kl - x_ik - x_jl as ambient dual vectors.
std::vector<RatVec> four_point_functionals(const M0nFan& m);
bool four_point_functionals_span(const M0nFan& m);

struct AtlasCone {
  CycleRigidifiedGraph type;
  std::vector<int> coordinates;  // bounded edges, one coordinate l_e each
  std::size_t dim() const { return coordinates.size(); }
};

AtlasCone atlas_cone(const CycleRigidifiedGraph& g);
// The face l_e = 0, carried by the contraction with the induced rigidification.
AtlasCone atlas_face(const AtlasCone& c, int edge);

}  // namespace psitrop
