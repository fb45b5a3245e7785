#include "random_fans.hpp"

#include <algorithm>

namespace psitrop::sample {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

WeightedFan complete_fan(Rng& rng, std::size_t k, int steps) {
  WeightedFan f;
  f.ambient = k;
  f.dim = static_cast<int>(k);
  for (std::size_t i = 0; i < k; ++i)
    for (int s : {1, -1}) {
      IntVec r(k, 0);
      r[i] = s;
      f.rays.push_back(r);
    }
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Cone c;
    for (std::size_t i = 0; i < k; ++i) c.push_back(static_cast<int>(2 * i + ((mask >> i) & 1)));
    f.cones.push_back(c);
  }
  for (int s = 0; s < steps; ++s) {
    const Cone& sigma = f.cones[uniform(rng, 0, static_cast<int>(f.cones.size()) - 1)];
    Cone tau;
    while (tau.size() < 2) {
      tau.clear();
      for (int r : sigma)
        if (uniform(rng, 0, 1)) tau.push_back(r);
    }
    IntVec u(k, 0);
    for (int r : tau) {
      int c = uniform(rng, 1, 2);
      for (std::size_t i = 0; i < k; ++i) u[i] += c * f.rays[r][i];
    }
    f.rays.push_back(primitive(u));
    const int nu = static_cast<int>(f.rays.size()) - 1;
    std::vector<Cone> next;
    for (const auto& c : f.cones) {
      if (!std::includes(c.begin(), c.end(), tau.begin(), tau.end())) {
        next.push_back(c);
        continue;
      }
      for (int r : tau) {
        Cone d;
        for (int x : c)
          if (x != r) d.push_back(x);
        d.push_back(nu);
        std::sort(d.begin(), d.end());
        next.push_back(d);
      }
    }
    f.cones = next;
  }
  f.weights.assign(f.cones.size(), 1);
  return f;
}

Rat SimplicialPL::operator()(const IntVec& v) const {
  const std::size_t k = fan.ambient;
  RatVec b(v.begin(), v.end());
  for (const auto& c : fan.cones) {
    std::vector<IntVec> cols;
    for (int r : c) cols.push_back(fan.rays[r]);
    auto lam = solve_rational(IntMatrix::from_columns(cols, k), b);
    if (!lam) continue;
    bool inside = true;
    for (const auto& x : *lam) inside = inside && x >= 0;
    if (!inside) continue;
    Rat s = 0;
    for (std::size_t t = 0; t < c.size(); ++t) s += (*lam)[t] * values[c[t]];
    return s;
  }
  throw DomainError("point outside the support of the fan");
}

PLFunction SimplicialPL::on(const WeightedFan& a) const {
  PLFunction p;
  for (const auto& r : a.rays) p.ray_values[r] = (*this)(r);
  return p;
}

SimplicialPL random_pl(Rng& rng, const WeightedFan& complete, int range) {
  SimplicialPL p;
  p.fan = complete;
  for (std::size_t r = 0; r < complete.rays.size(); ++r) p.values.push_back(uniform(rng, -range, range));
  return p;
}

WeightedFan balanced_curve(Rng& rng, std::size_t k, int count) {
  std::vector<IntVec> vs;
  IntVec sum(k, 0);
  while (static_cast<int>(vs.size()) < count) {
    IntVec v(k);
    for (auto& x : v) x = uniform(rng, -3, 3);
    if (is_zero(v)) continue;
    for (std::size_t i = 0; i < k; ++i) sum[i] -= v[i];
    vs.push_back(v);
  }
  if (!is_zero(sum)) vs.push_back(sum);
  WeightedFan f;
  f.ambient = k;
  f.dim = 1;
  for (const auto& v : vs) {
    f.rays.push_back(primitive(v));
    f.cones.push_back({static_cast<int>(f.rays.size()) - 1});
    f.weights.push_back(Rat(content(v)));
  }
  f.normalize();
  return f;
}

IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, -range, range);
  return m;
}

}  // namespace psitrop::sample
