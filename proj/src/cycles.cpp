#include "psitrop/cycles.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psitrop {

int Fan::ray_index(const IntVec& r) const {
  for (std::size_t i = 0; i < rays.size(); ++i)
    if (rays[i] == r) return static_cast<int>(i);
  return -1;
}

WeightedFan& WeightedFan::normalize() {
  std::map<std::vector<IntVec>, Rat> m = weight_map();
  std::set<IntVec> used;
  for (const auto& [c, w] : m)
    for (const auto& r : c) used.insert(r);
  rays.assign(used.begin(), used.end());
  std::map<IntVec, int> idx;
  for (std::size_t i = 0; i < rays.size(); ++i) idx[rays[i]] = static_cast<int>(i);
  cones.clear();
  weights.clear();
  std::vector<std::pair<Cone, Rat>> tmp;
  for (const auto& [c, w] : m) {
    Cone k;
    for (const auto& r : c) k.push_back(idx[r]);
    std::sort(k.begin(), k.end());
    tmp.emplace_back(k, w);
  }
  std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [c, w] : tmp) {
    cones.push_back(c);
    weights.push_back(w);
  }
  return *this;
}

std::map<std::vector<IntVec>, Rat> WeightedFan::weight_map() const {
  std::map<std::vector<IntVec>, Rat> m;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    std::vector<IntVec> key;
    for (int r : cones[i]) key.push_back(rays[r]);
    std::sort(key.begin(), key.end());
    m[key] += weights[i];
  }
  for (auto it = m.begin(); it != m.end();)
    it = it->second == 0 ? m.erase(it) : std::next(it);
  return m;
}

bool WeightedFan::same_cycle(const WeightedFan& o) const {
  return ambient == o.ambient && dim == o.dim && weight_map() == o.weight_map();
}

Rat WeightedFan::weight_of(const std::vector<IntVec>& cone_rays) const {
  auto key = cone_rays;
  std::sort(key.begin(), key.end());
  auto m = weight_map();
  auto it = m.find(key);
  return it == m.end() ? Rat(0) : it->second;
}

WeightedFan WeightedFan::scaled(const Rat& c) const {
  WeightedFan o = *this;
  for (auto& w : o.weights) w *= c;
  return o;
}

Fan WeightedFan::support() const { return Fan{ambient, rays, cones}; }

WeightedFan zero_cycle_at_origin(std::size_t ambient, const Rat& w) {
  WeightedFan a;
  a.ambient = ambient;
  a.dim = 0;
  a.cones = {Cone{}};
  a.weights = {w};
  return a;
}

namespace {

IntMatrix columns_of(const std::vector<IntVec>& rays, const Cone& c, std::size_t m) {
  std::vector<IntVec> cols;
  for (int r : c) cols.push_back(rays[r]);
  return IntMatrix::from_columns(cols, m);
}

IntVec coords_in(const IntMatrix& basis, const IntVec& v) {
  RatVec b(v.begin(), v.end());
  auto x = solve_rational(basis, b);
  if (!x) throw DomainError("vector outside the cone span");
  IntVec out;
  for (auto& q : *x) {
    if (q.get_den() != 1) throw DomainError("vector outside the cone lattice");
    out.push_back(q.get_num());
  }
  return out;
}

std::optional<RatVec> rat_coords_in(const IntMatrix& basis, const RatVec& v) { return solve_rational(basis, v); }

IntVec primitive_kernel_vector(const IntMatrix& T, std::size_t k) {
  // T: rows are ray coordinates (each of length k); returns primitive h with T h = 0
  if (T.rows() == 0) {
    if (k != 1) throw DomainError("kernel is not one-dimensional");
    return IntVec{1};
  }
  IntMatrix K = integer_kernel(T);
  if (K.cols() != 1) throw DomainError("kernel is not one-dimensional");
  return K.column(0);
}

// Facet normal functionals in cone-lattice coordinates, non-negative on the cone.
struct ConeHRep {
  ConeLattice lat;
  std::vector<Cone> facets;   // as subsets of the original cone indices
  std::vector<IntVec> normals;
};

ConeHRep hrep(const std::vector<IntVec>& rays, const Cone& c, std::size_t m) {
  ConeHRep h;
  h.lat = cone_lattice(rays, c);
  const int k = h.lat.dim;
  if (k == 0) return h;
  const std::size_t nr = c.size();
  std::set<Cone> seen;
  std::vector<int> pick(nr, 0);
  std::fill(pick.begin(), pick.begin() + (k - 1), 1);
  do {
    std::vector<IntVec> rowsv;
    for (std::size_t i = 0; i < nr; ++i)
      if (pick[i]) rowsv.push_back(h.lat.ray_coords[i]);
    IntMatrix T = IntMatrix::from_rows(rowsv, static_cast<std::size_t>(k));
    if (T.rows() > 0 && rank(T) != static_cast<std::size_t>(k - 1)) continue;
    IntVec n = primitive_kernel_vector(T, static_cast<std::size_t>(k));
    int sgn = 0;
    bool ok = true;
    Cone face;
    for (std::size_t i = 0; i < nr; ++i) {
      Int v = dot(n, h.lat.ray_coords[i]);
      if (v == 0) {
        face.push_back(c[i]);
        continue;
      }
      int s = v > 0 ? 1 : -1;
      if (sgn == 0) sgn = s;
      else if (s != sgn) ok = false;
    }
    if (!ok || sgn == 0) continue;
    if (!seen.insert(face).second) continue;
    if (sgn < 0)
      for (auto& x : n) x = -x;
    h.facets.push_back(face);
    h.normals.push_back(n);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  (void)m;
  return h;
}

struct NormalData {
  IntVec u;       // ambient
  IntVec coords;  // in the cone lattice basis of sigma
};

NormalData normal_in(const ConeLattice& L, const Cone& sigma, const Cone& tau) {
  const int k = L.dim;
  std::vector<IntVec> trow;
  int extra = -1;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (std::binary_search(tau.begin(), tau.end(), sigma[i]))
      trow.push_back(L.ray_coords[i]);
    else if (extra < 0)
      extra = static_cast<int>(i);
  }
  if (extra < 0) throw DomainError("face equals cone");
  IntMatrix T = IntMatrix::from_rows(trow, static_cast<std::size_t>(k));
  IntVec h = primitive_kernel_vector(T, static_cast<std::size_t>(k));
  Int s = dot(h, L.ray_coords[extra]);
  if (s == 0) throw DomainError("face is not of codimension one");
  if (s < 0)
    for (auto& x : h) x = -x;
  // c with h.c = 1
  IntVec c(k, 0);
  Int g = 0;
  for (int i = 0; i < k; ++i) {
    if (h[i] == 0) continue;
    if (g == 0) {
      g = h[i];
      c[i] = 1;
      continue;
    }
    Int x, y;
    Int g2 = ext_gcd(g, h[i], x, y);
    for (int j = 0; j < i; ++j) c[j] *= x;
    c[i] = y;
    g = g2;
  }
  if (g < 0) {
    g = -g;
    for (auto& x : c) x = -x;
  }
  if (g != 1) throw DomainError("normal functional not primitive");
  NormalData d;
  d.coords = c;
  d.u = L.basis.apply(c);
  return d;
}

std::map<Cone, std::vector<int>> codim_one_faces(const WeightedFan& a, const std::vector<ConeHRep>& hr) {
  std::map<Cone, std::vector<int>> faces;
  for (std::size_t s = 0; s < a.cones.size(); ++s)
    for (const auto& f : hr[s].facets) faces[f].push_back(static_cast<int>(s));
  return faces;
}

std::vector<ConeHRep> top_hreps(const WeightedFan& a, bool parallel) {
  std::vector<ConeHRep> hr(a.cones.size());
  std::exception_ptr err;
  const long n = static_cast<long>(a.cones.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      hr[i] = hrep(a.rays, a.cones[i], a.ambient);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (std::size_t i = 0; i < a.cones.size(); ++i)
    if (hr[i].lat.dim != a.dim) throw DomainError("mixed-dimensional support");
  return hr;
}

RatVec ambient_sum(std::size_t m) { return RatVec(m, Rat(0)); }

BalancingReport balancing_impl(const WeightedFan& a, bool parallel) {
  BalancingReport rep;
  if (a.dim == 0) return rep;
  auto hr = top_hreps(a, parallel);
  auto faces = codim_one_faces(a, hr);
  std::vector<std::pair<Cone, std::vector<int>>> fv(faces.begin(), faces.end());
  std::vector<std::optional<BalancingViolation>> res(fv.size());
  std::exception_ptr err;
  const long nf = static_cast<long>(fv.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < nf; ++i) {
    try {
      const auto& [tau, sig] = fv[i];
      RatVec sum = ambient_sum(a.ambient);
      for (int s : sig) {
        NormalData nd = normal_in(hr[s].lat, a.cones[s], tau);
        for (std::size_t j = 0; j < a.ambient; ++j) sum[j] += a.weights[s] * nd.u[j];
      }
      IntMatrix T = columns_of(a.rays, tau, a.ambient);
      if (!solve_rational(T, sum)) {
        Int den = 1;
        for (auto& q : sum) den = lcm(den, q.get_den());
        IntVec resid;
        for (auto& q : sum) resid.push_back(Int(q * den));
        res[i] = BalancingViolation{tau, resid};
      }
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (auto& r : res)
    if (r) {
      rep.balanced = false;
      rep.violations.push_back(*r);
    }
  return rep;
}

Rat face_weight(const LocalRayValues& phi, const WeightedFan& a, const std::vector<ConeHRep>& hr, const Cone& tau,
                const std::vector<int>& sig) {
  RatVec sum = ambient_sum(a.ambient);
  Rat corner = 0;
  RatVec ell0;
  for (std::size_t t = 0; t < sig.size(); ++t) {
    const int s = sig[t];
    const ConeLattice& L = hr[s].lat;
    NormalData nd = normal_in(L, a.cones[s], tau);
    // linear functional on the cone lattice matching the ray values
    IntMatrix Y = IntMatrix::from_rows(L.ray_coords, static_cast<std::size_t>(L.dim));
    RatVec vals;
    for (int r : a.cones[s]) vals.push_back(phi(tau, r));
    auto ell = solve_rational(Y, vals);
    if (!ell) throw RefinementRequired("function is not linear on a cone; refine first");
    Rat val = 0;
    for (int j = 0; j < L.dim; ++j) val += (*ell)[j] * nd.coords[j];
    corner += a.weights[s] * val;
    for (std::size_t j = 0; j < a.ambient; ++j) sum[j] += a.weights[s] * nd.u[j];
    if (t == 0) ell0 = *ell;
  }
  const ConeLattice& L0 = hr[sig[0]].lat;
  auto x = rat_coords_in(L0.basis, sum);
  if (!x) throw DomainError("weighted normal sum leaves the cone span");
  Rat on_face = 0;
  for (int j = 0; j < L0.dim; ++j) on_face += ell0[j] * (*x)[j];
  return on_face - corner;
}

WeightedFan divisor_impl(const LocalRayValues& phi, const WeightedFan& a, bool parallel) {
  if (a.dim == 0) throw DomainError("cannot intersect a zero-dimensional cycle with a divisor");
  auto hr = top_hreps(a, parallel);
  auto faces = codim_one_faces(a, hr);
  std::vector<std::pair<Cone, std::vector<int>>> fv(faces.begin(), faces.end());
  std::vector<Rat> w(fv.size());
  std::exception_ptr err;
  const long nf = static_cast<long>(fv.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < nf; ++i) {
    try {
      w[i] = face_weight(phi, a, hr, fv[i].first, fv[i].second);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  WeightedFan out;
  out.ambient = a.ambient;
  out.dim = a.dim - 1;
  out.rays = a.rays;
  for (std::size_t i = 0; i < fv.size(); ++i)
    if (w[i] != 0) {
      out.cones.push_back(fv[i].first);
      out.weights.push_back(w[i]);
    }
  out.normalize();
  return out;
}

}  // namespace

ConeLattice cone_lattice(const std::vector<IntVec>& rays, const Cone& c) {
  ConeLattice L;
  std::size_t m = c.empty() ? (rays.empty() ? 0 : rays[0].size()) : rays[c[0]].size();
  if (c.empty()) {
    L.basis = IntMatrix(m, 0);
    L.dim = 0;
    return L;
  }
  IntMatrix M = columns_of(rays, c, m);
  L.basis = saturate(M);
  L.dim = static_cast<int>(L.basis.cols());
  for (int r : c) L.ray_coords.push_back(coords_in(L.basis, rays[r]));
  return L;
}

std::vector<Cone> facets(const std::vector<IntVec>& rays, const Cone& c) {
  std::size_t m = rays.empty() ? 0 : rays[0].size();
  return hrep(rays, c, m).facets;
}

IntVec lattice_normal(const std::vector<IntVec>& rays, const Cone& sigma, const Cone& tau) {
  return normal_in(cone_lattice(rays, sigma), sigma, tau).u;
}

bool cone_contains(const std::vector<IntVec>& rays, const Cone& c, const IntVec& v) {
  std::size_t m = v.size();
  ConeHRep h = hrep(rays, c, m);
  if (h.lat.dim == 0) return is_zero(v);
  auto x = solve_rational(h.lat.basis, RatVec(v.begin(), v.end()));
  if (!x) return false;
  for (const auto& n : h.normals) {
    Rat s = 0;
    for (std::size_t j = 0; j < n.size(); ++j) s += n[j] * (*x)[j];
    if (s < 0) return false;
  }
  return true;
}

BalancingReport check_balancing(const WeightedFan& a) { return balancing_impl(a, true); }
BalancingReport check_balancing_serial(const WeightedFan& a) { return balancing_impl(a, false); }

Rat PLFunction::operator()(const IntVec& ray) const {
  Rat v = 0;
  auto it = ray_values.find(ray);
  if (it != ray_values.end()) v = it->second;
  for (std::size_t j = 0; j < linear.size() && j < ray.size(); ++j) v += linear[j] * ray[j];
  return v;
}

WeightedFan divisor_intersect(const PLFunction& phi, const WeightedFan& a) {
  return divisor_impl([&](const Cone&, int r) { return phi(a.rays[r]); }, a, true);
}

WeightedFan divisor_intersect(const LocalRayValues& phi, const WeightedFan& a) { return divisor_impl(phi, a, true); }

WeightedFan divisor_intersect_serial(const LocalRayValues& phi, const WeightedFan& a) {
  return divisor_impl(phi, a, false);
}

Rat corner_weight(const LocalRayValues& phi, const WeightedFan& a, const Cone& tau) {
  std::vector<ConeHRep> hr(a.cones.size());
  std::vector<int> sig;
  for (std::size_t s = 0; s < a.cones.size(); ++s) {
    if (!std::includes(a.cones[s].begin(), a.cones[s].end(), tau.begin(), tau.end())) continue;
    if (a.cones[s].size() == tau.size()) continue;
    hr[s] = hrep(a.rays, a.cones[s], a.ambient);
    if (std::find(hr[s].facets.begin(), hr[s].facets.end(), tau) != hr[s].facets.end())
      sig.push_back(static_cast<int>(s));
  }
  if (sig.empty()) return 0;
  return face_weight(phi, a, hr, tau, sig);
}

WeightedFan push_forward(const IntMatrix& f, const WeightedFan& a, const Fan* target) {
  if (f.cols() != a.ambient) throw DomainError("push_forward: map does not match the source lattice");
  const std::size_t p = f.rows();
  WeightedFan out;
  out.ambient = p;
  out.dim = a.dim;
  std::map<std::vector<IntVec>, Rat> acc;
  std::vector<ConeHRep> target_h;
  if (target) {
    target_h.resize(target->cones.size());
    for (std::size_t t = 0; t < target->cones.size(); ++t) target_h[t] = hrep(target->rays, target->cones[t], p);
  }
  for (std::size_t s = 0; s < a.cones.size(); ++s) {
    if (a.weights[s] == 0) continue;
    ConeLattice L = cone_lattice(a.rays, a.cones[s]);
    if (L.dim != a.dim) throw DomainError("mixed-dimensional support");
    if (L.dim == 0) L.basis = IntMatrix(a.ambient, 0);
    IntMatrix fB = f * L.basis;
    if (a.dim > 0 && rank(fB) < static_cast<std::size_t>(a.dim)) continue;
    std::vector<IntVec> dirs;
    for (int r : a.cones[s]) {
      IntVec im = f.apply(a.rays[r]);
      if (is_zero(im)) continue;
      im = primitive(im);
      if (std::find(dirs.begin(), dirs.end(), im) == dirs.end()) dirs.push_back(im);
    }
    std::sort(dirs.begin(), dirs.end());
    if (target) {
      int hit = -1;
      for (std::size_t t = 0; t < target->cones.size() && hit < 0; ++t) {
        if (target_h[t].lat.dim != a.dim) continue;
        bool inside = true;
        for (const auto& d : dirs)
          if (!cone_contains(target->rays, target->cones[t], d)) inside = false;
        if (!inside) continue;
        Cone img(dirs.size());
        std::iota(img.begin(), img.end(), 0);
        bool covers = true;
        for (int r : target->cones[t])
          if (!cone_contains(dirs, img, target->rays[r])) covers = false;
        if (!covers) throw RefinementRequired("image cone is a proper part of a target cone; refine first");
        hit = static_cast<int>(t);
      }
      if (hit < 0) throw RefinementRequired("image cone not contained in a target cone");
      const ConeLattice& T = target_h[hit].lat;
      IntMatrix C(static_cast<std::size_t>(a.dim), static_cast<std::size_t>(a.dim));
      for (int j = 0; j < a.dim; ++j) {
        IntVec x = coords_in(T.basis, fB.column(j));
        for (int i = 0; i < a.dim; ++i) C(i, j) = x[i];
      }
      Int idx = abs(determinant(C));
      std::vector<IntVec> key;
      for (int r : target->cones[hit]) key.push_back(target->rays[r]);
      std::sort(key.begin(), key.end());
      acc[key] += a.weights[s] * idx;
    } else {
      // keep only extreme directions
      std::vector<IntVec> ext;
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        std::vector<IntVec> others;
        for (std::size_t j = 0; j < dirs.size(); ++j)
          if (j != i) others.push_back(dirs[j]);
        Cone oc(others.size());
        std::iota(oc.begin(), oc.end(), 0);
        if (others.empty() || !cone_contains(others, oc, dirs[i])) ext.push_back(dirs[i]);
      }
      Int idx = 1;
      if (a.dim > 0) {
        IntMatrix T = saturate(IntMatrix::from_columns(ext, p));
        IntMatrix C(static_cast<std::size_t>(a.dim), static_cast<std::size_t>(a.dim));
        for (int j = 0; j < a.dim; ++j) {
          IntVec x = coords_in(T, fB.column(j));
          for (int i = 0; i < a.dim; ++i) C(i, j) = x[i];
        }
        idx = abs(determinant(C));
      }
      acc[ext] += a.weights[s] * idx;
    }
  }
  for (const auto& [key, w] : acc) {
    Cone c;
    for (const auto& r : key) {
      auto it = std::find(out.rays.begin(), out.rays.end(), r);
      if (it == out.rays.end()) {
        out.rays.push_back(r);
        c.push_back(static_cast<int>(out.rays.size()) - 1);
      } else {
        c.push_back(static_cast<int>(it - out.rays.begin()));
      }
    }
    std::sort(c.begin(), c.end());
    out.cones.push_back(c);
    out.weights.push_back(w);
  }
  out.normalize();
  return out;
}

Rat degree(const WeightedFan& a) {
  if (a.dim != 0) throw DomainError("degree of a positive-dimensional cycle");
  Rat s = 0;
  for (const auto& w : a.weights) s += w;
  return s;
}

namespace {

struct HalfSpaces {
  std::vector<IntVec> equalities;
  std::vector<IntVec> inequalities;
};

HalfSpaces ambient_hrep(const std::vector<IntVec>& rays, const Cone& c, std::size_t m) {
  HalfSpaces hs;
  ConeHRep h = hrep(rays, c, m);
  IntMatrix Bt = h.lat.dim > 0 ? h.lat.basis.transpose() : IntMatrix(0, m);
  if (h.lat.dim == 0) {
    for (std::size_t i = 0; i < m; ++i) {
      IntVec e(m, 0);
      e[i] = 1;
      hs.equalities.push_back(e);
    }
    return hs;
  }
  IntMatrix K = integer_kernel(Bt);
  for (std::size_t j = 0; j < K.cols(); ++j) hs.equalities.push_back(K.column(j));
  for (const auto& n : h.normals) {
    auto l = solve_rational(Bt, RatVec(n.begin(), n.end()));
    if (!l) throw DomainError("facet normal does not lift");
    Int den = 1;
    for (auto& q : *l) den = lcm(den, q.get_den());
    IntVec li;
    for (auto& q : *l) li.push_back(Int(q * den));
    hs.inequalities.push_back(li);
  }
  return hs;
}

std::vector<IntVec> extreme_rays(const HalfSpaces& hs, std::size_t m) {
  IntMatrix E = IntMatrix::from_rows(hs.equalities, m);
  IntMatrix K = hs.equalities.empty() ? IntMatrix::identity(m) : integer_kernel(E);
  const std::size_t p = K.cols();
  std::vector<IntVec> out;
  if (p == 0) return out;
  std::vector<IntVec> ik;
  for (const auto& row : hs.inequalities) {
    IntVec r(p);
    for (std::size_t j = 0; j < p; ++j) {
      Int s = 0;
      for (std::size_t i = 0; i < m; ++i) s += row[i] * K(i, j);
      r[j] = s;
    }
    ik.push_back(r);
  }
  auto feasible = [&](const IntVec& d) {
    for (const auto& r : ik)
      if (dot(r, d) < 0) return false;
    return true;
  };
  auto add = [&](const IntVec& d) {
    IntVec v = primitive(K.apply(d));
    if (!is_zero(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (p == 1) {
    IntVec d{1}, nd{-1};
    if (feasible(d)) add(d);
    if (feasible(nd)) add(nd);
    return out;
  }
  const std::size_t q = ik.size();
  if (q < p - 1) return out;
  std::vector<int> pick(q, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(p - 1), 1);
  do {
    std::vector<IntVec> sel;
    for (std::size_t i = 0; i < q; ++i)
      if (pick[i]) sel.push_back(ik[i]);
    IntMatrix S = IntMatrix::from_rows(sel, p);
    if (rank(S) != p - 1) continue;
    IntVec d = integer_kernel(S).column(0);
    IntVec nd = d;
    for (auto& x : nd) x = -x;
    if (feasible(d)) add(d);
    if (feasible(nd)) add(nd);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace

WeightedFan refine(const WeightedFan& a, const Fan& b) {
  if (a.ambient != b.ambient) throw DomainError("refine: ambient mismatch");
  const std::size_t m = a.ambient;
  WeightedFan out;
  out.ambient = m;
  out.dim = a.dim;
  std::vector<HalfSpaces> bh;
  for (const auto& t : b.cones) bh.push_back(ambient_hrep(b.rays, t, m));
  for (std::size_t s = 0; s < a.cones.size(); ++s) {
    HalfSpaces ah = ambient_hrep(a.rays, a.cones[s], m);
    for (const auto& th : bh) {
      HalfSpaces both = ah;
      both.equalities.insert(both.equalities.end(), th.equalities.begin(), th.equalities.end());
      both.inequalities.insert(both.inequalities.end(), th.inequalities.begin(), th.inequalities.end());
      std::vector<IntVec> ext = extreme_rays(both, m);
      if (a.dim == 0) {
        out.cones.push_back({});
        out.weights.push_back(a.weights[s]);
        break;
      }
      if (ext.empty()) continue;
      if (rank(IntMatrix::from_columns(ext, m)) != static_cast<std::size_t>(a.dim)) continue;
      Cone c;
      for (const auto& r : ext) {
        auto it = std::find(out.rays.begin(), out.rays.end(), r);
        if (it == out.rays.end()) {
          out.rays.push_back(r);
          c.push_back(static_cast<int>(out.rays.size()) - 1);
        } else {
          c.push_back(static_cast<int>(it - out.rays.begin()));
        }
      }
      std::sort(c.begin(), c.end());
      out.cones.push_back(c);
      out.weights.push_back(a.weights[s]);
    }
  }
  out.normalize();
  return out;
}

bool overlaps(const Interval& a, const Interval& b) {
  // lower end of the intersection
  auto lower_ok = [](const Interval& x, const Interval& y) {
    // is there a point above x.lo and below y.hi?
    if (!x.lo || !y.hi) return true;
    if (*x.lo < *y.hi) return true;
    return *x.lo == *y.hi && x.lo_closed && y.hi_closed;
  };
  return lower_ok(a, b) && lower_ok(b, a);
}

void check_cocycle(const LineBundleCocycle& c) {
  const int k = static_cast<int>(c.charts.size());
  for (const auto& [ij, f] : c.transitions) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= k || j >= k) throw DomainError("transition references a missing chart");
    if (!overlaps(c.charts[i], c.charts[j])) throw DomainError("transition on an empty overlap");
  }
  auto get = [&](int i, int j) -> AffineFunction {
    if (i == j) return {};
    auto it = c.transitions.find({i, j});
    if (it != c.transitions.end()) return it->second;
    auto jt = c.transitions.find({j, i});
    if (jt == c.transitions.end()) throw DomainError("missing transition on an overlap");
    return {-jt->second.slope, -jt->second.constant};
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !overlaps(c.charts[i], c.charts[j])) continue;
      AffineFunction a = get(i, j), b = get(j, i);
      if (a.slope != -b.slope || a.constant != -b.constant) throw DomainError("cochain is not antisymmetric");
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        if (i == j || j == l || i == l) continue;
        const auto &A = c.charts[i], &B = c.charts[j], &C = c.charts[l];
        Interval ab{A.lo, A.hi, A.lo_closed, A.hi_closed};
        if (!overlaps(A, B) || !overlaps(B, C) || !overlaps(A, C)) continue;
        // triple overlap nonempty on a line iff pairwise overlaps are (Helly in dimension one)
        (void)ab;
        AffineFunction x = get(i, j), y = get(j, l), z = get(i, l);
        if (x.slope + y.slope != z.slope || x.constant + y.constant != z.constant)
          throw DomainError("cocycle identity fails on a triple overlap");
      }
}

Int c1_from_cocycle(const LineBundleCocycle& c) {
  check_cocycle(c);
  Int deg = 0;
  for (std::size_t i = 0; i + 1 < c.charts.size(); ++i) {
    auto it = c.transitions.find({static_cast<int>(i + 1), static_cast<int>(i)});
    if (it != c.transitions.end()) {
      deg += it->second.slope;
      continue;
    }
    auto jt = c.transitions.find({static_cast<int>(i), static_cast<int>(i + 1)});
    if (jt == c.transitions.end()) throw DomainError("consecutive charts without a transition");
    deg -= jt->second.slope;
  }
  return deg;
}

LineBundleCocycle tensor(const LineBundleCocycle& a, const LineBundleCocycle& b) {
  if (a.charts.size() != b.charts.size()) throw DomainError("tensor: covers differ");
  LineBundleCocycle c = a;
  for (const auto& [ij, f] : b.transitions) {
    auto& g = c.transitions[ij];
    g.slope += f.slope;
    g.constant += f.constant;
  }
  check_cocycle(c);
  return c;
}

LineBundleCocycle tp1_bundle(const Int& a) {
  LineBundleCocycle c;
  c.charts.push_back(Interval{std::nullopt, std::nullopt, true, false});  // [-inf, inf)
  c.charts.push_back(Interval{std::nullopt, std::nullopt, false, true});  // (-inf, inf]
  c.transitions[{1, 0}] = AffineFunction{a, 0};
  c.transitions[{0, 1}] = AffineFunction{-a, 0};
  return c;
}

namespace {

Int int_from_json(const nlohmann::json& x) {
  if (x.is_string()) {
    Int v;
    if (v.set_str(x.get<std::string>(), 10) != 0) throw DomainError("bad integer " + x.get<std::string>());
    return v;
  }
  if (x.is_number_integer()) return Int(x.get<long>());
  throw DomainError("expected an integer");
}

Rat rat_from_json(const nlohmann::json& x) {
  if (x.is_string()) return parse_rational(x.get<std::string>());
  if (x.is_number_integer()) return Rat(x.get<long>());
  throw DomainError("expected a rational");
}

IntVec vec_from_json(const nlohmann::json& x) {
  IntVec v;
  for (const auto& e : x) v.push_back(int_from_json(e));
  return v;
}

nlohmann::json vec_to_json(const IntVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

}  // namespace

nlohmann::json to_json(const WeightedFan& a) {
  nlohmann::json j;
  j["ambient"] = a.ambient;
  j["dim"] = a.dim;
  j["rays"] = nlohmann::json::array();
  for (const auto& r : a.rays) j["rays"].push_back(vec_to_json(r));
  j["cones"] = a.cones;
  j["weights"] = nlohmann::json::array();
  for (const auto& w : a.weights) j["weights"].push_back(to_string(w));
  return j;
}

WeightedFan fan_from_json(const nlohmann::json& j) {
  try {
    WeightedFan a;
    for (const auto& r : j.at("rays")) a.rays.push_back(vec_from_json(r));
    a.ambient = j.contains("ambient") ? j.at("ambient").get<std::size_t>() : (a.rays.empty() ? 0 : a.rays[0].size());
    for (const auto& r : a.rays) {
      if (r.size() != a.ambient) throw DomainError("ray of wrong length");
      if (content(r) != 1) throw DomainError("ray generators must be primitive");
    }
    for (const auto& c : j.at("cones")) {
      Cone k = c.get<Cone>();
      for (int r : k)
        if (r < 0 || r >= static_cast<int>(a.rays.size())) throw DomainError("cone references a missing ray");
      std::sort(k.begin(), k.end());
      a.cones.push_back(k);
    }
    if (j.contains("weights"))
      for (const auto& w : j.at("weights")) a.weights.push_back(rat_from_json(w));
    else
      a.weights.assign(a.cones.size(), Rat(1));
    if (a.weights.size() != a.cones.size()) throw DomainError("weights do not match cones");
    if (j.contains("dim"))
      a.dim = j.at("dim").get<int>();
    else
      a.dim = a.cones.empty() ? 0 : cone_lattice(a.rays, a.cones[0]).dim;
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed fan json: ") + e.what());
  }
}

PLFunction function_from_json(const nlohmann::json& j) {
  try {
    PLFunction f;
    if (j.contains("rays")) {
      const auto& rays = j.at("rays");
      const auto& vals = j.at("values");
      if (rays.size() != vals.size()) throw DomainError("values do not match rays");
      for (std::size_t i = 0; i < rays.size(); ++i) f.ray_values[primitive(vec_from_json(rays[i]))] = rat_from_json(vals[i]);
    }
    if (j.contains("linear"))
      for (const auto& x : j.at("linear")) f.linear.push_back(rat_from_json(x));
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed function json: ") + e.what());
  }
}

IntMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    std::vector<IntVec> rows;
    for (const auto& r : j) rows.push_back(vec_from_json(r));
    return IntMatrix::from_rows(rows);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed matrix json: ") + e.what());
  }
}

nlohmann::json to_json(const BalancingReport& r) {
  nlohmann::json j;
  j["balanced"] = r.balanced;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"face", v.face}, {"residual", vec_to_json(v.residual)}});
  return j;
}

}  // namespace psitrop
