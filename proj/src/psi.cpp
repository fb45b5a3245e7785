#include "psitrop/psi.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

namespace psitrop {

namespace {

int lowest_label(LabelSet s) { return std::countr_zero(s) + 1; }

std::vector<LabelSet> other_directions(const SplitTree& t, int i) {
  std::vector<LabelSet> out;
  for (LabelSet d : t.directions(t.leg_vertex[i - 1]))
    if (d != label_bit(i)) out.push_back(d);
  return out;
}

std::string split_name(Split s, int n) {
  std::string a, b;
  for (int l : labels_of(s)) a += std::to_string(l);
  for (int l : labels_of(all_labels(n) & ~s)) b += std::to_string(l);
  return "D_" + a + "|" + b;
}

// Face tree with the choice of (j,k) at leg i.
std::pair<int, int> choose_jk(const SplitTree& t, int i, const FlagChoice& choice) {
  auto dirs = other_directions(t, i);
  auto [a, b] = choice(dirs);
  if (a == b || a < 0 || b < 0 || a >= static_cast<int>(dirs.size()) || b >= static_cast<int>(dirs.size()))
    throw DomainError("flag choice must pick two distinct directions");
  return {lowest_label(dirs[a]), lowest_label(dirs[b])};
}

}  // namespace

FlagChoice smallest_label_choice() {
  return [](const std::vector<LabelSet>& dirs) {
    std::vector<int> idx(dirs.size());
    for (std::size_t k = 0; k < dirs.size(); ++k) idx[k] = static_cast<int>(k);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return lowest_label(dirs[x]) < lowest_label(dirs[y]); });
    return std::pair<int, int>{idx[0], idx[1]};
  };
}

int gromov_on_split(Split s, int i, int j, int k, int n) {
  LabelSet side = (s & label_bit(i)) ? s : (all_labels(n) & ~s);
  return (side & label_bit(j)) || (side & label_bit(k)) ? 0 : 1;
}

PsiRepresentative psi_representative(int n, int i) {
  if (n < 4) throw DomainError("psi classes on the fan need n >= 4");
  if (i < 1 || i > n) throw DomainError("no such leg");
  M0nFan m = build_m0n(n);
  PsiRepresentative p;
  p.n = n;
  p.i = i;
  p.fan.ambient = m.ambient();
  p.fan.dim = n - 4;
  p.fan.rays = m.rays;
  for (const auto& t : all_tree_types(n)) {
    if (static_cast<int>(t.size()) != n - 4) continue;
    SplitTree tr = tree_from_splits(n, t);
    if (tr.valence(tr.leg_vertex[i - 1]) != 4) continue;
    p.fan.cones.push_back(m.cone_of(t));
    p.fan.weights.push_back(1);
  }
  p.fan.normalize();
  return p;
}

LocalRayValues psi_local_values(const M0nFan& m, const WeightedFan& a, int i, FlagChoice choice) {
  if (!choice) choice = smallest_label_choice();
  const int n = m.n;
  return [&m, rays = a.rays, i, n, choice](const Cone& face, int r) -> Rat {
    SplitTree t = tree_from_splits(n, m.splits_of(face, rays));
    auto [j, k] = choose_jk(t, i, choice);
    return -gromov_on_split(m.split_of_ray.at(rays[r]), i, j, k, n);
  };
}

LocalRayValues pulled_back_psi_values(const M0nFan& m, const WeightedFan& a, int i) {
  const int np = m.n, n = m.n - 1;
  return [&m, rays = a.rays, i, n, np](const Cone& face, int r) -> Rat {
    std::set<Split> down;
    for (Split s : m.splits_of(face, rays)) {
      Split d = forget_split(s, np, np);
      if (d) down.insert(d);
    }
    SplitTree t = tree_from_splits(n, std::vector<Split>(down.begin(), down.end()));
    auto [j, k] = choose_jk(t, i, smallest_label_choice());
    Split d = forget_split(m.split_of_ray.at(rays[r]), np, np);
    if (!d) return 0;
    return -gromov_on_split(d, i, j, k, n);
  };
}

PLFunction boundary_function(const M0nFan& m, Split s) {
  PLFunction f;
  f.ray_values[m.rays.at(m.ray_of_split.at(canonical_split(s, m.n)))] = -1;
  return f;
}

WeightedFan psi_product(const M0nFan& m, const std::vector<int>& exponents, FlagChoice choice) {
  if (static_cast<int>(exponents.size()) != m.n) throw DomainError("need one exponent per leg");
  int sum = 0;
  for (int e : exponents) {
    if (e < 0) throw DomainError("negative exponent");
    sum += e;
  }
  if (sum > m.n - 3) throw DomainError("exponent sum exceeds the dimension");
  WeightedFan a = m.fundamental_class();
  for (int i = 1; i <= m.n; ++i)
    for (int r = 0; r < exponents[i - 1]; ++r) a = divisor_intersect(psi_local_values(m, a, i, choice), a);
  return a;
}

Rat psi_product_degree(int n, const std::vector<int>& exponents) {
  int sum = 0;
  for (int e : exponents) sum += e;
  if (static_cast<int>(exponents.size()) != n) throw DomainError("need one exponent per leg");
  if (sum != n - 3) throw DomainError("exponents must sum to n-3");
  if (n > 8) throw DomainError("n too large");
  if (n == 3) return 1;
  return degree(psi_product(build_m0n(n), exponents));
}

std::vector<std::pair<int, int>> valid_flag_pairs(const SplitTree& t, int i) {
  auto dirs = other_directions(t, i);
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b)
      for (int j : labels_of(dirs[a]))
        for (int k : labels_of(dirs[b])) out.push_back({std::min(j, k), std::max(j, k)});
  std::sort(out.begin(), out.end());
  return out;
}

bool flag_choice_independent(const M0nFan& m, const WeightedFan& a, int i) {
  std::set<Cone> faces;
  for (const auto& c : a.cones)
    for (const auto& f : facets(a.rays, c)) faces.insert(f);
  for (const auto& tau : faces) {
    SplitTree t = tree_from_splits(m.n, m.splits_of(tau, a.rays));
    std::optional<Rat> first;
    for (auto [j, k] : valid_flag_pairs(t, i)) {
      LocalRayValues phi = [&, j = j, k = k](const Cone&, int r) -> Rat {
        return -gromov_on_split(m.split_of_ray.at(a.rays[r]), i, j, k, m.n);
      };
      Rat w = corner_weight(phi, a, tau);
      if (!first) first = w;
      else if (*first != w) return false;
    }
  }
  return true;
}

bool overlap_linear(const M0nFan& m, int i) {
  IntMatrix R = IntMatrix::from_rows(m.rays, m.ambient());
  std::vector<std::pair<int, int>> jk;
  for (int j = 1; j <= m.n; ++j)
    for (int k = j + 1; k <= m.n; ++k)
      if (j != i && k != i) jk.push_back({j, k});
  for (std::size_t p = 0; p < jk.size(); ++p)
    for (std::size_t q = p + 1; q < jk.size(); ++q) {
      RatVec diff;
      for (Split s : m.splits)
        diff.push_back(gromov_on_split(s, i, jk[p].first, jk[p].second, m.n) -
                       gromov_on_split(s, i, jk[q].first, jk[q].second, m.n));
      auto mu = solve_rational(R, diff);
      if (!mu) return false;
      for (const auto& x : *mu)
        if (x.get_den() != 1) return false;
    }
  return true;
}

std::vector<CurveClass> test_curves(const M0nFan& mp) {
  struct Div {
    std::string name;
    int psi = 0;
    Split split = 0;
  };
  std::vector<Div> divs;
  for (int k = 1; k <= mp.n; ++k) divs.push_back({"psi_" + std::to_string(k), k, 0});
  for (Split s : mp.splits) divs.push_back({split_name(s, mp.n), 0, s});
  const int steps = mp.n - 4;
  std::vector<CurveClass> out;
  std::vector<std::string> names;
  std::function<void(std::size_t, const WeightedFan&)> rec = [&](std::size_t from, const WeightedFan& a) {
    if (static_cast<int>(names.size()) == steps) {
      out.push_back({names, a});
      return;
    }
    for (std::size_t d = from; d < divs.size(); ++d) {
      WeightedFan b = divs[d].psi ? divisor_intersect(psi_local_values(mp, a, divs[d].psi), a)
                                  : divisor_intersect(boundary_function(mp, divs[d].split), a);
      names.push_back(divs[d].name);
      rec(d, b);
      names.pop_back();
    }
  };
  rec(0, mp.fundamental_class());
  return out;
}

PullbackReport pullback_check(const M0nFan& mp, const std::vector<CurveClass>& curves, int i) {
  const int n = mp.n - 1;
  if (i < 1 || i > n) throw DomainError("no such leg");
  PullbackReport rep;
  rep.n = n;
  rep.i = i;
  rep.ok = true;
  const Split istar = canonical_split(label_bit(i) | label_bit(n + 1), n + 1);
  const IntVec& istar_ray = mp.rays[mp.ray_of_split.at(istar)];
  for (const auto& c : curves) {
    PullbackCurve pc;
    pc.divisors = c.divisors;
    const WeightedFan& a = c.cycle;
    if (a.cones.empty()) {
      pc.ok = true;
      rep.curves.push_back(pc);
      continue;
    }
    pc.psi = degree(divisor_intersect(psi_local_values(mp, a, i), a));
    pc.pulled_back = degree(divisor_intersect(pulled_back_psi_values(mp, a, i), a));
    pc.boundary = degree(divisor_intersect(boundary_function(mp, istar), a));
    pc.boundary_ray_weight = a.weight_of({istar_ray});
    pc.ok = pc.psi == pc.pulled_back + pc.boundary && pc.boundary == pc.boundary_ray_weight;
    rep.ok = rep.ok && pc.ok;
    rep.curves.push_back(pc);
  }
  // fiber of the forgetful map: leg n+1 moving along the tree
  WeightedFan fib;
  fib.ambient = mp.ambient();
  fib.dim = 1;
  for (int k = 1; k <= n; ++k) {
    fib.rays.push_back(mp.rays[mp.ray_of_split.at(canonical_split(label_bit(k) | label_bit(n + 1), n + 1))]);
    fib.cones.push_back({k - 1});
    fib.weights.push_back(1);
  }
  bool fib_balanced = check_balancing(fib).balanced;
  rep.fiber_pulled_back = degree(divisor_intersect(pulled_back_psi_values(mp, fib, i), fib));
  rep.fiber_psi = degree(divisor_intersect(psi_local_values(mp, fib, i), fib));
  Rat fib_boundary = degree(divisor_intersect(boundary_function(mp, istar), fib));
  rep.ok = rep.ok && fib_balanced && rep.fiber_pulled_back == 0 && rep.fiber_psi == fib_boundary;
  return rep;
}

PullbackReport pullback_check(int n, int i) {
  if (n < 4 || n > 6) throw DomainError("pullback check needs 4 <= n <= 6");
  M0nFan mp = build_m0n(n + 1);
  return pullback_check(mp, test_curves(mp), i);
}

DilatonReport dilaton_pushforward(int n) {
  if (n < 3 || n > 7) throw DomainError("dilaton check needs 3 <= n <= 7");
  M0nFan up = build_m0n(n + 1), down = build_m0n(n);
  WeightedFan top = up.fundamental_class();
  WeightedFan a = divisor_intersect(psi_local_values(up, top, n + 1), top);
  ForgetfulMap f = forgetful_map(n);
  Fan target = down.fan();
  DilatonReport r;
  r.n = n;
  r.factor = n - 2;
  r.pushed = push_forward(f.lattice_map, a, &target);
  r.matches = r.pushed.same_cycle(down.fundamental_class(r.factor).normalize());
  for (const auto& c : down.top_cones) {
    std::vector<IntVec> key;
    for (int x : c) key.push_back(down.rays[x]);
    r.cone_matches.push_back(r.pushed.weight_of(key) == r.factor);
  }
  // each cone over a fixed tree has weight one and maps with index one
  std::map<std::vector<IntVec>, int> count;
  r.fiber_ok = true;
  for (std::size_t c = 0; c < a.cones.size(); ++c) {
    WeightedFan one = a;
    one.cones = {a.cones[c]};
    one.weights = {a.weights[c]};
    WeightedFan img = push_forward(f.lattice_map, one, &target);
    if (a.weights[c] != 1 || img.cones.size() != 1 || img.weights[0] != 1) r.fiber_ok = false;
    if (img.cones.size() == 1) {
      std::vector<IntVec> key;
      for (int x : img.cones[0]) key.push_back(img.rays[x]);
      std::sort(key.begin(), key.end());
      ++count[key];
    }
  }
  if (count.size() != down.top_cones.size()) r.fiber_ok = false;
  for (const auto& [k, v] : count)
    if (v != n - 2) r.fiber_ok = false;
  return r;
}

}  // namespace psitrop
