#include "psitrop/moduli.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>

namespace psitrop {

Split canonical_split(LabelSet side, int n) { return (side & 1u) ? side : (all_labels(n) & ~side); }

bool is_split(LabelSet side, int n) {
  const int a = std::popcount(side & all_labels(n));
  return a >= 2 && n - a >= 2;
}

bool compatible(Split a, Split b, int n) {
  a = canonical_split(a, n);
  b = canonical_split(b, n);
  return (a & b) == a || (a & b) == b || (a | b) == all_labels(n);
}

std::vector<int> labels_of(LabelSet s) {
  std::vector<int> out;
  for (int l = 1; s; ++l, s >>= 1)
    if (s & 1u) out.push_back(l);
  return out;
}

std::vector<LabelSet> SplitTree::directions(int v) const {
  std::vector<LabelSet> out;
  for (int l = 1; l <= n; ++l)
    if (leg_vertex[l - 1] == v) out.push_back(label_bit(l));
  for (const auto& [w, e] : adj[v]) {
    // the side of edge e away from v
    LabelSet side = edges[e];
    int probe = labels_of(side)[0];
    // walk from v towards probe's vertex without crossing e: if reachable, side is on v's side
    std::vector<char> seen(adj.size(), 0);
    std::queue<int> q;
    q.push(v);
    seen[v] = 1;
    bool near = false;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x == leg_vertex[probe - 1]) near = true;
      for (const auto& [y, f] : adj[x])
        if (f != e && !seen[y]) {
          seen[y] = 1;
          q.push(y);
        }
    }
    out.push_back(near ? (all_labels(n) & ~side) : side);
  }
  return out;
}

int SplitTree::valence(int v) const {
  int c = static_cast<int>(adj[v].size());
  for (int x : leg_vertex)
    if (x == v) ++c;
  return c;
}

StableGraph SplitTree::graph() const {
  StableGraph g;
  for (std::size_t v = 0; v < adj.size(); ++v) g.add_vertex(0);
  std::vector<std::pair<int, int>> ends(edges.size(), {-1, -1});
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (const auto& [w, e] : adj[v])
      if (static_cast<int>(v) < w) ends[e] = {static_cast<int>(v), w};
  for (const auto& [a, b] : ends) g.add_edge(a, b);
  for (int l = 1; l <= n; ++l) g.add_leg(leg_vertex[l - 1], l);
  return g;
}

SplitTree tree_from_splits(int n, std::vector<Split> splits) {
  SplitTree t;
  t.n = n;
  const LabelSet all = all_labels(n);
  const LabelSet nbit = label_bit(n);
  for (auto& s : splits) {
    if (!is_split(s, n)) throw DomainError("not a split");
    s = canonical_split(s, n);
  }
  for (std::size_t a = 0; a < splits.size(); ++a)
    for (std::size_t b = a + 1; b < splits.size(); ++b) {
      if (splits[a] == splits[b]) throw DomainError("repeated split");
      if (!compatible(splits[a], splits[b], n)) throw DomainError("incompatible splits");
    }
  t.edges = splits;
  std::vector<LabelSet> cluster(splits.size());
  for (std::size_t e = 0; e < splits.size(); ++e) cluster[e] = (splits[e] & nbit) ? (all & ~splits[e]) : splits[e];
  // vertex 0 is the root; vertex e+1 is the cluster of edge e
  t.adj.assign(splits.size() + 1, {});
  auto parent_of = [&](LabelSet c, int self) {
    int best = 0;
    LabelSet best_set = all;
    for (std::size_t f = 0; f < cluster.size(); ++f) {
      if (static_cast<int>(f) == self) continue;
      if ((cluster[f] & c) == c && cluster[f] != c && std::popcount(cluster[f]) < std::popcount(best_set)) {
        best = static_cast<int>(f) + 1;
        best_set = cluster[f];
      }
    }
    return best;
  };
  for (std::size_t e = 0; e < splits.size(); ++e) {
    int p = parent_of(cluster[e], static_cast<int>(e));
    t.adj[p].push_back({static_cast<int>(e) + 1, static_cast<int>(e)});
    t.adj[e + 1].push_back({p, static_cast<int>(e)});
  }
  t.leg_vertex.assign(n, 0);
  for (int l = 1; l <= n; ++l) t.leg_vertex[l - 1] = parent_of(label_bit(l), -1);
  return t;
}

std::vector<Split> splits_of_graph(const StableGraph& g, int n) {
  if (betti_number(g) != 0) throw DomainError("graph is not a tree");
  std::vector<Split> out;
  for (int e : g.bounded_edges()) {
    int start = g.flag_vertex[g.edge_flags[e][0]];
    std::vector<char> seen(g.num_vertices(), 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    LabelSet side = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int f : g.flags_at(v)) {
        int x = g.flag_edge[f];
        if (x == e) continue;
        if (g.is_leg(x)) {
          side |= label_bit(g.leg_label(x));
          continue;
        }
        int w = g.flag_vertex[g.other_flag(f)];
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    out.push_back(canonical_split(side, n));
  }
  return out;
}

namespace {

std::vector<Split> all_splits(int n) {
  std::vector<Split> out;
  for (LabelSet s = 1; s <= all_labels(n); s += 2)
    if (is_split(s, n)) out.push_back(s);
  return out;
}

}  // namespace

std::vector<std::vector<Split>> all_tree_types(int n) {
  std::vector<Split> sp = all_splits(n);
  std::vector<std::vector<Split>> out;
  std::vector<Split> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    out.push_back(cur);
    for (std::size_t i = from; i < sp.size(); ++i) {
      bool ok = true;
      for (Split s : cur)
        if (!compatible(s, sp[i], n)) ok = false;
      if (!ok) continue;
      cur.push_back(sp[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

int M0nFan::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // lexicographic position of (i, j), 1 <= i < j <= n
  return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
}

Fan M0nFan::fan() const { return Fan{ambient(), rays, top_cones}; }

WeightedFan M0nFan::fundamental_class(const Rat& w) const {
  WeightedFan a;
  a.ambient = ambient();
  a.dim = dim();
  a.rays = rays;
  a.cones = top_cones;
  a.weights.assign(top_cones.size(), w);
  return a;
}

Cone M0nFan::cone_of(const std::vector<Split>& s) const {
  Cone c;
  for (Split x : s) c.push_back(ray_of_split.at(canonical_split(x, n)));
  std::sort(c.begin(), c.end());
  return c;
}

std::vector<Split> M0nFan::splits_of(const Cone& c, const std::vector<IntVec>& rs) const {
  std::vector<Split> out;
  for (int r : c) {
    auto it = split_of_ray.find(rs[r]);
    if (it == split_of_ray.end()) throw DomainError("ray is not a split ray");
    out.push_back(it->second);
  }
  return out;
}

RatVec M0nFan::point(const RatVec& d) const {
  RatVec out(ambient(), Rat(0));
  for (std::size_t r = 0; r < ambient(); ++r)
    for (std::size_t c = 0; c < F.cols(); ++c) out[r] += F(r, c) * d[c] / 2;
  return out;
}

M0nFan build_m0n(int n) {
  if (n < 3) throw DomainError("M0,n needs n >= 3");
  if (n > 12) throw DomainError("n too large");
  M0nFan m;
  m.n = n;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) m.pairs.push_back({i, j});
  const std::size_t N = m.pairs.size();
  IntMatrix phiT(static_cast<std::size_t>(n), N);
  for (std::size_t p = 0; p < N; ++p) {
    phiT(m.pairs[p].first - 1, p) = 1;
    phiT(m.pairs[p].second - 1, p) = 1;
  }
  m.F = integer_kernel(phiT).transpose();
  m.splits = all_splits(n);
  for (std::size_t k = 0; k < m.splits.size(); ++k) {
    Split s = m.splits[k];
    // F v_I = -2 F w_I where w_I marks pairs inside I
    IntVec w(N, 0);
    for (std::size_t p = 0; p < N; ++p) {
      bool a = s & label_bit(m.pairs[p].first), b = s & label_bit(m.pairs[p].second);
      if (a && b) w[p] = -1;
    }
    IntVec r = m.F.apply(w);
    if (content(r) != 1) throw DomainError("split ray is not primitive");
    m.rays.push_back(r);
    m.ray_of_split[s] = static_cast<int>(k);
    m.split_of_ray[r] = s;
  }
  for (const auto& t : all_tree_types(n))
    if (static_cast<int>(t.size()) == n - 3) m.top_cones.push_back(m.cone_of(t));
  std::sort(m.top_cones.begin(), m.top_cones.end());
  return m;
}

void check_point(const MetricGraphPoint& p) {
  check_structure(p.type);
  auto be = p.type.bounded_edges();
  if (p.lengths.size() != be.size()) throw DomainError("lengths must be given on exactly the bounded edges");
  for (int e : be) {
    auto it = p.lengths.find(e);
    if (it == p.lengths.end()) throw DomainError("missing length for edge " + std::to_string(e));
    if (it->second <= 0) throw DomainError("lengths must be positive");
  }
}

DistanceVector distance_coordinates(const MetricGraphPoint& p, int n) {
  check_point(p);
  const StableGraph& g = p.type;
  if (genus(g) != 0) throw DomainError("distance coordinates need a genus-0 type");
  DistanceVector d;
  d.n = n;
  std::vector<std::vector<Rat>> dist(g.num_vertices());
  for (std::size_t s = 0; s < g.num_vertices(); ++s) {
    std::vector<Rat> ds(g.num_vertices(), Rat(-1));
    ds[s] = 0;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int f : g.flags_at(v)) {
        int e = g.flag_edge[f];
        if (g.is_leg(e)) continue;
        int w = g.flag_vertex[g.other_flag(f)];
        if (ds[w] >= 0) continue;
        ds[w] = ds[v] + p.lengths.at(e);
        q.push(w);
      }
    }
    dist[s] = ds;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      d.doubled_coords.push_back(dist[g.vertex_of_label(i)][g.vertex_of_label(j)]);
  return d;
}

Split forget_split(Split s, int label, int n_before) {
  LabelSet side = canonical_split(s, n_before) & ~label_bit(label);
  // relabel labels above the forgotten one down by one
  LabelSet low = side & (label_bit(label) - 1);
  LabelSet high = (side >> label) << (label - 1);
  LabelSet r = low | high;
  if (!is_split(r, n_before - 1)) return 0;
  return canonical_split(r, n_before - 1);
}

ForgetfulMap forgetful_map(int n) {
  M0nFan a = build_m0n(n + 1), b = build_m0n(n);
  ForgetfulMap f;
  f.n = n;
  IntMatrix P(b.pairs.size(), a.pairs.size());
  f.pair_projection.assign(a.pairs.size(), -1);
  for (std::size_t p = 0; p < a.pairs.size(); ++p) {
    auto [i, j] = a.pairs[p];
    if (j == n + 1) continue;
    int q = b.pair_index(i, j);
    f.pair_projection[p] = q;
    P(q, p) = 1;
  }
  IntMatrix R = a.ambient() ? right_inverse(a.F) : IntMatrix(a.pairs.size(), 0);
  f.lattice_map = b.ambient() ? b.F * P * R : IntMatrix(0, a.ambient());
  return f;
}

MetricGraphPoint forget_leg(const MetricGraphPoint& p, int label) {
  check_point(p);
  const StableGraph& g = p.type;
  const int leg = g.leg_of(label);
  const int v = g.vertex_of_label(label);
  struct E {
    int a, b;
    Rat len;
    bool keep;
  };
  std::vector<E> bounded;
  std::vector<std::pair<int, int>> legs;  // (vertex, label)
  std::map<int, int> bounded_id;
  for (int e : g.bounded_edges()) {
    bounded_id[e] = static_cast<int>(bounded.size());
    bounded.push_back({g.flag_vertex[g.edge_flags[e][0]], g.flag_vertex[g.edge_flags[e][1]], p.lengths.at(e), true});
  }
  for (const auto& [l, e] : g.marks)
    if (e != leg) legs.push_back({g.flag_vertex[g.edge_flags[e][0]], l});
  std::vector<char> vertex_alive(g.num_vertices(), 1);
  if (g.genus[v] == 0 && g.valence(v) == 3) {
    std::vector<int> rest;
    for (int f : g.flags_at(v))
      if (g.flag_edge[f] != leg) rest.push_back(g.flag_edge[f]);
    const int e1 = rest[0], e2 = rest[1];
    const bool l1 = g.is_leg(e1), l2 = g.is_leg(e2);
    if (e1 == e2) throw DomainError("forgetting leaves an unstable loop");
    if (l1 && l2) throw DomainError("forgetting leaves an unstable vertex");
    vertex_alive[v] = 0;
    if (!l1 && !l2) {
      E& a = bounded[bounded_id[e1]];
      E& b = bounded[bounded_id[e2]];
      int x = a.a == v ? a.b : a.a;
      int y = b.a == v ? b.b : b.a;
      a = {x, y, a.len + b.len, true};
      b.keep = false;
    } else {
      int be = l1 ? e2 : e1;
      int le = l1 ? e1 : e2;
      E& a = bounded[bounded_id[be]];
      int x = a.a == v ? a.b : a.a;
      a.keep = false;
      for (auto& [w, l] : legs)
        if (l == g.leg_label(le)) w = x;
    }
  } else if (g.genus[v] == 0 && g.valence(v) < 3) {
    throw DomainError("unstable input");
  }
  MetricGraphPoint out;
  std::vector<int> vid(g.num_vertices(), -1);
  for (std::size_t x = 0; x < g.num_vertices(); ++x)
    if (vertex_alive[x]) vid[x] = out.type.add_vertex(g.genus[x]);
  for (const auto& e : bounded)
    if (e.keep) {
      int id = out.type.add_edge(vid[e.a], vid[e.b]);
      out.lengths[id] = e.len;
    }
  for (const auto& [w, l] : legs) out.type.add_leg(vid[w], l > label ? l - 1 : l);
  return out;
}

std::vector<RatVec> four_point_functionals(const M0nFan& m) {
  std::vector<RatVec> out;
  IntMatrix FT = m.F.transpose();
  const int n = m.n;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          RatVec lam(m.pairs.size(), Rat(0));
          lam[m.pair_index(i, j)] += 1;
          lam[m.pair_index(k, l)] += 1;
          lam[m.pair_index(i, k)] -= 1;
          lam[m.pair_index(j, l)] -= 1;
          auto mu = solve_rational(FT, lam);
          if (!mu) throw DomainError("four-point functional does not descend");
          out.push_back(*mu);
        }
  return out;
}

bool four_point_functionals_span(const M0nFan& m) {
  if (m.ambient() == 0) return true;
  std::vector<IntVec> rows;
  for (const auto& mu : four_point_functionals(m)) {
    IntVec r;
    for (const auto& q : mu) {
      if (q.get_den() != 1) return false;
      r.push_back(q.get_num());
    }
    rows.push_back(r);
  }
  return lattice_index(IntMatrix::from_rows(rows, m.ambient()).transpose()) == 1;
}

AtlasCone atlas_cone(const CycleRigidifiedGraph& g) {
  check_structure(g.base);
  AtlasCone c;
  c.type = g;
  c.coordinates = g.base.bounded_edges();
  return c;
}

AtlasCone atlas_face(const AtlasCone& c, int edge) {
  if (std::find(c.coordinates.begin(), c.coordinates.end(), edge) == c.coordinates.end())
    throw DomainError("edge is not a coordinate of the cone");
  return atlas_cone(contract_rigidified(c.type, edge));
}

}  // namespace psitrop
