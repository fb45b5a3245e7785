#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "psitrop/cycles.hpp"
#include "psitrop/graph.hpp"

namespace psitrop {

// Family C^a over TP^1: on the central fiber the charts T_- and T_+ are glued by
// x_+ = x_scale * x_-, y_+ = y_- + y_shear * x_-; base coordinate is -x_- on T_-.
struct EllipticFamilySpec {
  Int a = 0;
  Int x_scale() const { return -1; }
  Int y_shear() const { return -a; }
};

// Transition of s_1^* of the vertical coordinate, as a cocycle on TP^1.
LineBundleCocycle psi_cocycle(const EllipticFamilySpec& s);
Int psi_pullback_degree(const EllipticFamilySpec& s);

struct IsomFan {
  Int a = 0, b = 0;
  WeightedFan fan;  // four rays of weight 2
};

IsomFan isom_fan(const Int& a, const Int& b);

enum class CoverClass { I, II, III, IV };
std::string to_string(CoverClass c);

// M0,4 rays named by the pairing of the branch points 1,2 | 3,4 and so on.
enum class BranchRay { A = 0, B = 1, C = 2 };  // 12|34, 13|24, 14|23

struct CoverClassRecord {
  CoverClass cls = CoverClass::I;
  int d = 0;
  int a = 0;  // class III only
  Int count = 0;
  Rat weight;
  Rat source_slope, branch_slope;
  BranchRay target_ray = BranchRay::A;
};

std::vector<CoverClassRecord> cover_class_table(int d);

struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

Rat source_degree(int d);
std::array<Rat, 3> branch_ray_totals(int d);
Rat branch_degree(int d);
Rat psi_covers_degree(int d);

// Harmonic map of stable graphs given edge by edge.
struct CoverDescription {
  StableGraph source, target;
  std::vector<int> vertex_image;  // per source vertex
  std::vector<int> edge_image;    // per source edge
  std::vector<int> dilation;      // per source edge
  std::vector<int> local_degree;  // per source vertex
};

struct RhReport {
  bool harmonic = true;
  bool riemann_hurwitz = true;
  bool fibers = true;
  std::vector<std::string> failures;
  bool ok() const { return harmonic && riemann_hurwitz && fibers; }
};

RhReport local_rh_check(const CoverDescription& c);
CoverDescription representative_cover(CoverClass cls, int d, int a = 0);

nlohmann::json to_json(const CoverClassRecord& r);

}  // namespace psitrop
