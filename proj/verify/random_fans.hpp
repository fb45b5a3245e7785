#pragma once

#include <random>

#include "psitrop/cycles.hpp"

namespace psitrop::sample {

using Rng = std::mt19937_64;

// Complete simplicial fan: orthants of Z^k, then `steps` random stellar subdivisions.
WeightedFan complete_fan(Rng& rng, std::size_t k, int steps);

// Function linear on each top cone of a complete simplicial fan, given by ray values.
struct SimplicialPL {
  WeightedFan fan;
  std::vector<Rat> values;
  Rat operator()(const IntVec& v) const;
  PLFunction on(const WeightedFan& a) const;  // restriction to the rays of a
};

SimplicialPL random_pl(Rng& rng, const WeightedFan& complete, int range = 3);

// Balanced one-dimensional fan in Z^k with `count` + 1 random directions.
WeightedFan balanced_curve(Rng& rng, std::size_t k, int count);

IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range = 2);

int uniform(Rng& rng, int lo, int hi);

}  // namespace psitrop::sample
