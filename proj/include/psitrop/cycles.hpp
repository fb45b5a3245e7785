#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psitrop/lattice.hpp"

namespace psitrop {

using Cone = std::vector<int>;  // sorted ray indices; the empty cone is the origin

// A cone complex in Z^ambient given by primitive rays and cones over them.
struct Fan {
  std::size_t ambient = 0;
  std::vector<IntVec> rays;
  std::vector<Cone> cones;
  int ray_index(const IntVec& r) const;  // -1 if absent
};

// Pure k-dimensional weighted fan; weights live on the listed cones.
struct WeightedFan {
  std::size_t ambient = 0;
  int dim = 0;
  std::vector<IntVec> rays;
  std::vector<Cone> cones;
  std::vector<Rat> weights;

  // Drops zero weights and unused rays, merges duplicate cones, sorts canonically.
  WeightedFan& normalize();
  std::map<std::vector<IntVec>, Rat> weight_map() const;
  bool same_cycle(const WeightedFan& o) const;
  Rat weight_of(const std::vector<IntVec>& cone_rays) const;
  WeightedFan scaled(const Rat& c) const;
  Fan support() const;
};

WeightedFan zero_cycle_at_origin(std::size_t ambient, const Rat& w);

// Saturated lattice data of a cone: basis columns of span ∩ Z^m and ray coordinates in it.
struct ConeLattice {
  IntMatrix basis;
  std::vector<IntVec> ray_coords;
  int dim = 0;
};

ConeLattice cone_lattice(const std::vector<IntVec>& rays, const Cone& c);
std::vector<Cone> facets(const std::vector<IntVec>& rays, const Cone& c);
// Primitive generator of Λ_σ/Λ_τ pointing into σ, as an ambient vector.
IntVec lattice_normal(const std::vector<IntVec>& rays, const Cone& sigma, const Cone& tau);
bool cone_contains(const std::vector<IntVec>& rays, const Cone& c, const IntVec& v);

struct BalancingViolation {
  Cone face;
  IntVec residual;  // weighted normal sum, scaled to clear denominators
};

struct BalancingReport {
  bool balanced = true;
  std::vector<BalancingViolation> violations;
};

BalancingReport check_balancing(const WeightedFan& a);
BalancingReport check_balancing_serial(const WeightedFan& a);

// Values at rays of a piecewise-linear function, optionally depending on the
// codimension-one face whose star is evaluated (local Cartier data).
using LocalRayValues = std::function<Rat(const Cone& face, int ray)>;

// Global PL function: values at primitive ray generators plus a linear part.
struct PLFunction {
  std::map<IntVec, Rat> ray_values;
  RatVec linear;  // empty means zero
  Rat operator()(const IntVec& ray) const;
};

// Corner locus with the min convention: weight(τ) = φ_τ(Σ ω u) − Σ ω φ_σ(u).
WeightedFan divisor_intersect(const PLFunction& phi, const WeightedFan& a);
WeightedFan divisor_intersect(const LocalRayValues& phi, const WeightedFan& a);
WeightedFan divisor_intersect_serial(const LocalRayValues& phi, const WeightedFan& a);
// Corner weight at a single codimension-one face (indices into a.rays).
Rat corner_weight(const LocalRayValues& phi, const WeightedFan& a, const Cone& tau);

// Weighted push-forward along an integer matrix (target x source). Without a
// target fan the image cones themselves are used.
WeightedFan push_forward(const IntMatrix& f, const WeightedFan& a, const Fan* target = nullptr);

Rat degree(const WeightedFan& a);

// Subdivides the support of a along the cones of b (b should cover |a|).
WeightedFan refine(const WeightedFan& a, const Fan& b);

// Line bundles on a compact 1-dimensional base covered by interval charts.
struct Interval {
  std::optional<Rat> lo, hi;  // nullopt = infinite end
  bool lo_closed = false, hi_closed = false;
};
bool overlaps(const Interval& a, const Interval& b);

struct AffineFunction {
  Int slope = 0;
  Rat constant = 0;
  bool operator==(const AffineFunction&) const = default;
};

struct LineBundleCocycle {
  std::vector<Interval> charts;  // ordered along the base
  std::map<std::pair<int, int>, AffineFunction> transitions;  // (i, j) -> ξ_ij on U_i ∩ U_j
};

void check_cocycle(const LineBundleCocycle& c);
Int c1_from_cocycle(const LineBundleCocycle& c);
LineBundleCocycle tensor(const LineBundleCocycle& a, const LineBundleCocycle& b);
LineBundleCocycle tp1_bundle(const Int& a);

nlohmann::json to_json(const WeightedFan& a);
WeightedFan fan_from_json(const nlohmann::json& j);
PLFunction function_from_json(const nlohmann::json& j);
IntMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BalancingReport& r);

}  // namespace psitrop
