#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "psitrop/moduli.hpp"

namespace psitrop {

struct PsiRepresentative {
  int n = 0, i = 0;
  WeightedFan fan;
};

// Cones of M0,n whose tree has leg i at a four-valent vertex, weight 1.
PsiRepresentative psi_representative(int n, int i);

// Picks two of the directions at the vertex of leg i (leg i itself excluded).
using FlagChoice = std::function<std::pair<int, int>(const std::vector<LabelSet>& directions)>;
// Directions whose smallest labels are smallest.
FlagChoice smallest_label_choice();

// Value of the Gromov product G_i(j,k) on the ray of a split.
int gromov_on_split(Split s, int i, int j, int k, int n);

// Cartier data for psi_i: on the star of a face, minus G_i(j,k) with (j,k)
// read off the face's tree.
// Ray and face indices refer to a's rays.
LocalRayValues psi_local_values(const M0nFan& m, const WeightedFan& a, int i, FlagChoice choice = {});
// Pull-back of psi_i along forgetting label n+1; m is M0,n+1.
LocalRayValues pulled_back_psi_values(const M0nFan& m, const WeightedFan& a, int i);
// Boundary divisor: -1 on the ray of the split, 0 elsewhere.
PLFunction boundary_function(const M0nFan& m, Split s);

WeightedFan psi_product(const M0nFan& m, const std::vector<int>& exponents, FlagChoice choice = {});
Rat psi_product_degree(int n, const std::vector<int>& exponents);

// All valid (j,k) label pairs at the vertex of leg i in the tree of a face.
std::vector<std::pair<int, int>> valid_flag_pairs(const SplitTree& t, int i);

// Weights at each codimension-one face of a for every valid choice; true if
// they never depend on the choice.
bool flag_choice_independent(const M0nFan& m, const WeightedFan& a, int i);

// Differences of the Gromov products are integral linear functionals on M0,n.
bool overlap_linear(const M0nFan& m, int i);

struct PullbackCurve {
  std::vector<std::string> divisors;
  Rat psi, pulled_back, boundary, boundary_ray_weight;
  bool ok = false;
};

struct PullbackReport {
  int n = 0, i = 0;
  std::vector<PullbackCurve> curves;
  Rat fiber_pulled_back, fiber_psi;
  bool ok = false;
};

// Curves on M0,n+1 cut out by n-3 divisors from psi classes and boundary divisors.
struct CurveClass {
  std::vector<std::string> divisors;
  WeightedFan cycle;
};
std::vector<CurveClass> test_curves(const M0nFan& m_plus);

PullbackReport pullback_check(int n, int i);
PullbackReport pullback_check(const M0nFan& m_plus, const std::vector<CurveClass>& curves, int i);

struct DilatonReport {
  int n = 0;
  Rat factor;
  WeightedFan pushed;
  bool matches = false;
  bool fiber_ok = false;
  std::vector<bool> cone_matches;  // per top cone of M0,n
};

DilatonReport dilaton_pushforward(int n);

}  // namespace psitrop
