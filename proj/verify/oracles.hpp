#pragma once

#include <map>
#include <set>
#include <vector>

#include "psitrop/arith.hpp"
#include "psitrop/graph.hpp"

// Reference computations kept apart from the library code paths.
namespace psitrop::oracle {

// <tau_{a_1} ... tau_{a_n}> in genus 0 by the string equation.
Rat string_equation(std::vector<int> exponents);

// Rational plane curves of degree d through 3d-1 points, Kontsevich's recursion.
Int kontsevich(int d);

Int covers_source(int d);
Rat covers_branch(int d);
Rat covers_psi(int d);

// Leg labels on the far side of each bounded edge of a tree, seen from flag f.
std::set<int> labels_beyond(const StableGraph& g, int flag);

// Leg-to-leg distance from the split description of a metric tree.
Rat split_distance(const StableGraph& tree, const std::map<int, Rat>& lengths, int i, int j);

// Signed overlap of the walk a (from flag a_from to a_to) with the walk b,
// each optionally crossing the bounded edge left through flag `through`;
// the remaining steps run inside the subgraph spanned by `inner` edges.
Rat signed_overlap(const StableGraph& g, const std::set<int>& inner, const std::map<int, Rat>& lengths,
                   int a_from, int a_to, int b_from, int b_to, int through = -1);

}  // namespace psitrop::oracle
