#include "psitrop/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

#include "psitrop/lattice.hpp"

namespace psitrop {

int StableGraph::add_vertex(int g) {
  genus.push_back(g);
  return static_cast<int>(genus.size()) - 1;
}

int StableGraph::add_edge(int u, int v) {
  int e = static_cast<int>(edge_flags.size());
  int f0 = static_cast<int>(flag_vertex.size());
  flag_vertex.push_back(u);
  flag_edge.push_back(e);
  flag_vertex.push_back(v);
  flag_edge.push_back(e);
  edge_flags.push_back({f0, f0 + 1});
  unbounded.push_back(0);
  return e;
}

int StableGraph::add_leg(int v, int label) {
  int e = static_cast<int>(edge_flags.size());
  int f = static_cast<int>(flag_vertex.size());
  flag_vertex.push_back(v);
  flag_edge.push_back(e);
  edge_flags.push_back({f});
  unbounded.push_back(1);
  marks[label] = e;
  return e;
}

bool StableGraph::is_loop(int e) const {
  const auto& fl = edge_flags[e];
  return fl.size() == 2 && flag_vertex[fl[0]] == flag_vertex[fl[1]];
}

int StableGraph::other_flag(int f) const {
  const auto& fl = edge_flags[flag_edge[f]];
  if (fl.size() != 2) return -1;
  return fl[0] == f ? fl[1] : fl[0];
}

std::vector<int> StableGraph::flags_at(int v) const {
  std::vector<int> out;
  for (std::size_t f = 0; f < flag_vertex.size(); ++f)
    if (flag_vertex[f] == v) out.push_back(static_cast<int>(f));
  return out;
}

int StableGraph::valence(int v) const {
  return static_cast<int>(std::count(flag_vertex.begin(), flag_vertex.end(), v));
}

int StableGraph::leg_label(int e) const {
  for (const auto& [l, x] : marks)
    if (x == e) return l;
  return -1;
}

int StableGraph::leg_of(int label) const {
  auto it = marks.find(label);
  if (it == marks.end()) throw DomainError("unknown mark " + std::to_string(label));
  return it->second;
}

int StableGraph::vertex_of_label(int label) const { return flag_vertex[edge_flags[leg_of(label)][0]]; }

std::vector<int> StableGraph::bounded_edges() const {
  std::vector<int> out;
  for (std::size_t e = 0; e < edge_flags.size(); ++e)
    if (!unbounded[e]) out.push_back(static_cast<int>(e));
  return out;
}

void check_structure(const StableGraph& g) {
  const int V = static_cast<int>(g.num_vertices());
  const int F = static_cast<int>(g.num_flags());
  const int E = static_cast<int>(g.num_edges());
  if (g.flag_edge.size() != g.flag_vertex.size()) throw StructuralError("flag maps have different sizes");
  if (g.unbounded.size() != g.edge_flags.size()) throw StructuralError("edge arrays have different sizes");
  for (int f = 0; f < F; ++f) {
    if (g.flag_vertex[f] < 0 || g.flag_vertex[f] >= V) throw StructuralError("flag " + std::to_string(f) + " references a missing vertex");
    if (g.flag_edge[f] < 0 || g.flag_edge[f] >= E) throw StructuralError("flag " + std::to_string(f) + " references a missing edge");
  }
  std::vector<int> seen(F, 0);
  for (int e = 0; e < E; ++e) {
    const auto& fl = g.edge_flags[e];
    if (fl.empty() || fl.size() > 2) throw StructuralError("edge " + std::to_string(e) + " must have one or two flags");
    for (int f : fl) {
      if (f < 0 || f >= F || g.flag_edge[f] != e) throw StructuralError("edge " + std::to_string(e) + " has a dangling flag");
      ++seen[f];
    }
    if (fl.size() == 2 && fl[0] == fl[1]) throw StructuralError("edge with repeated flag");
    if (fl.size() == 1 && !g.unbounded[e]) throw StructuralError("leg must be unbounded");
  }
  for (int f = 0; f < F; ++f)
    if (seen[f] != 1) throw StructuralError("flag " + std::to_string(f) + " not owned by exactly one edge");
  for (int v = 0; v < V; ++v)
    if (g.genus[v] < 0) throw StructuralError("negative vertex genus");
  std::set<int> legs;
  for (const auto& [l, e] : g.marks) {
    if (e < 0 || e >= E || g.edge_flags[e].size() != 1) throw StructuralError("mark " + std::to_string(l) + " is not a leg");
    if (!legs.insert(e).second) throw StructuralError("two marks on one leg");
  }
  for (int e = 0; e < E; ++e)
    if (g.edge_flags[e].size() == 1 && !legs.count(e)) throw StructuralError("unmarked leg");
}

ValidationReport validate(const StableGraph& g) {
  check_structure(g);
  ValidationReport r;
  const int V = static_cast<int>(g.num_vertices());
  if (V == 0) {
    r.connected = false;
    return r;
  }
  std::vector<std::vector<int>> adj(V);
  for (const auto& fl : g.edge_flags)
    if (fl.size() == 2) {
      int a = g.flag_vertex[fl[0]], b = g.flag_vertex[fl[1]];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  std::vector<char> vis(V, 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!vis[w]) vis[w] = 1, q.push(w);
  }
  r.connected = std::all_of(vis.begin(), vis.end(), [](char c) { return c != 0; });
  for (int v = 0; v < V; ++v)
    if (g.valence(v) + 2 * g.genus[v] < 3) r.unstable_vertices.push_back(v);
  return r;
}

int betti_number(const StableGraph& g) {
  int internal = 0;
  for (const auto& fl : g.edge_flags)
    if (fl.size() == 2) ++internal;
  return internal - static_cast<int>(g.num_vertices()) + 1;
}

int genus(const StableGraph& g) {
  int legs = 0;
  for (const auto& fl : g.edge_flags)
    if (fl.size() == 1) ++legs;
  int s = static_cast<int>(g.num_edges()) - legs - static_cast<int>(g.num_vertices()) + 1;
  for (int x : g.genus) s += x;
  return s;
}

GraphMorphism contract_edge(const StableGraph& g, int e) {
  if (e < 0 || e >= static_cast<int>(g.num_edges())) throw DomainError("no such edge");
  if (g.unbounded[e]) throw DomainError("cannot contract an unbounded edge");
  const auto& fl = g.edge_flags[e];
  int a = g.flag_vertex[fl[0]], b = g.flag_vertex[fl[1]];
  GraphMorphism m;
  const int V = static_cast<int>(g.num_vertices());
  m.vertex_map.assign(V, -1);
  int keep = std::min(a, b), drop = std::max(a, b);
  int next = 0;
  for (int v = 0; v < V; ++v) {
    if (v == drop && a != b) continue;
    m.vertex_map[v] = next++;
  }
  if (a != b) m.vertex_map[drop] = m.vertex_map[keep];
  m.graph.genus.assign(next, 0);
  for (int v = 0; v < V; ++v) m.graph.genus[m.vertex_map[v]] += g.genus[v];
  if (a == b) m.graph.genus[m.vertex_map[a]] += 1;

  m.edge_map.assign(g.num_edges(), -1);
  m.flag_map.assign(g.num_flags(), -1);
  int ne = 0;
  for (int x = 0; x < static_cast<int>(g.num_edges()); ++x)
    if (x != e) m.edge_map[x] = ne++;
  int nf = 0;
  for (int f = 0; f < static_cast<int>(g.num_flags()); ++f)
    if (g.flag_edge[f] != e) m.flag_map[f] = nf++;
  m.graph.flag_vertex.assign(nf, 0);
  m.graph.flag_edge.assign(nf, 0);
  for (int f = 0; f < static_cast<int>(g.num_flags()); ++f) {
    if (m.flag_map[f] < 0) continue;
    m.graph.flag_vertex[m.flag_map[f]] = m.vertex_map[g.flag_vertex[f]];
    m.graph.flag_edge[m.flag_map[f]] = m.edge_map[g.flag_edge[f]];
  }
  m.graph.edge_flags.assign(ne, {});
  m.graph.unbounded.assign(ne, 0);
  for (int x = 0; x < static_cast<int>(g.num_edges()); ++x) {
    if (m.edge_map[x] < 0) continue;
    for (int f : g.edge_flags[x]) m.graph.edge_flags[m.edge_map[x]].push_back(m.flag_map[f]);
    m.graph.unbounded[m.edge_map[x]] = g.unbounded[x];
  }
  for (const auto& [l, x] : g.marks) m.graph.marks[l] = m.edge_map[x];
  return m;
}

GraphMorphism contract_edges(const StableGraph& g, std::vector<int> edges) {
  GraphMorphism acc;
  acc.graph = g;
  acc.vertex_map.resize(g.num_vertices());
  acc.flag_map.resize(g.num_flags());
  acc.edge_map.resize(g.num_edges());
  std::iota(acc.vertex_map.begin(), acc.vertex_map.end(), 0);
  std::iota(acc.flag_map.begin(), acc.flag_map.end(), 0);
  std::iota(acc.edge_map.begin(), acc.edge_map.end(), 0);
  for (int e0 : edges) {
    int e = acc.edge_map.at(e0);
    if (e < 0) throw DomainError("edge contracted twice");
    GraphMorphism step = contract_edge(acc.graph, e);
    for (auto& v : acc.vertex_map) v = step.vertex_map[v];
    for (auto& f : acc.flag_map)
      if (f >= 0) f = step.flag_map[f];
    for (auto& x : acc.edge_map)
      if (x >= 0) x = step.edge_map[x];
    acc.graph = std::move(step.graph);
  }
  return acc;
}

StableGraph stretch_edge(const StableGraph& g, int e) {
  if (e < 0 || e >= static_cast<int>(g.num_edges())) throw DomainError("no such edge");
  if (g.unbounded[e]) throw DomainError("cannot stretch an unbounded edge");
  StableGraph h = g;
  h.unbounded[e] = 1;
  return h;
}

bool Automorphism::is_identity() const {
  for (std::size_t i = 0; i < flag.size(); ++i)
    if (flag[i] != static_cast<int>(i)) return false;
  for (std::size_t i = 0; i < vertex.size(); ++i)
    if (vertex[i] != static_cast<int>(i)) return false;
  return true;
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  for (int x : b.vertex) c.vertex.push_back(a.vertex[x]);
  for (int x : b.flag) c.flag.push_back(a.flag[x]);
  for (int x : b.edge) c.edge.push_back(a.edge[x]);
  return c;
}

Automorphism inverse(const Automorphism& a) {
  Automorphism c;
  c.vertex.resize(a.vertex.size());
  c.flag.resize(a.flag.size());
  c.edge.resize(a.edge.size());
  for (std::size_t i = 0; i < a.vertex.size(); ++i) c.vertex[a.vertex[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < a.flag.size(); ++i) c.flag[a.flag[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < a.edge.size(); ++i) c.edge[a.edge[i]] = static_cast<int>(i);
  return c;
}

namespace {

// Backtracking search for flag bijections a -> b compatible with all structure.
void isomorphisms(const StableGraph& a, const StableGraph& b, bool first_only, std::vector<Automorphism>& out) {
  const int F = static_cast<int>(a.num_flags());
  if (a.num_flags() != b.num_flags() || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return;
  // order flags by BFS so that vertex constraints bind early
  std::vector<int> order;
  {
    std::vector<char> vis(a.num_vertices(), 0);
    std::vector<char> fseen(F, 0);
    for (int s = 0; s < static_cast<int>(a.num_vertices()); ++s) {
      if (vis[s]) continue;
      std::queue<int> q;
      q.push(s);
      vis[s] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int f : a.flags_at(v)) {
          if (!fseen[f]) fseen[f] = 1, order.push_back(f);
          int o = a.other_flag(f);
          if (o >= 0) {
            int w = a.flag_vertex[o];
            if (!vis[w]) vis[w] = 1, q.push(w);
          }
        }
      }
    }
  }
  std::vector<int> val_a(a.num_vertices()), val_b(b.num_vertices());
  for (int v = 0; v < static_cast<int>(a.num_vertices()); ++v) val_a[v] = a.valence(v);
  for (int v = 0; v < static_cast<int>(b.num_vertices()); ++v) val_b[v] = b.valence(v);

  std::vector<int> fmap(F, -1), fused(F, 0);
  std::vector<int> vmap(a.num_vertices(), -1), vused(b.num_vertices(), 0);
  std::vector<int> emap(a.num_edges(), -1), eused(b.num_edges(), 0);
  bool stop = false;

  std::function<void(int)> rec = [&](int idx) {
    if (stop) return;
    if (idx == F) {
      out.push_back({vmap, fmap, emap});
      if (first_only) stop = true;
      return;
    }
    int f = order[idx];
    int vf = a.flag_vertex[f], ef = a.flag_edge[f];
    for (int h = 0; h < F && !stop; ++h) {
      if (fused[h]) continue;
      int vh = b.flag_vertex[h], eh = b.flag_edge[h];
      if (a.genus[vf] != b.genus[vh] || val_a[vf] != val_b[vh]) continue;
      if (vmap[vf] == -1 ? vused[vh] != 0 : vmap[vf] != vh) continue;
      if (a.is_leg(ef) != b.is_leg(eh) || a.unbounded[ef] != b.unbounded[eh] || a.is_loop(ef) != b.is_loop(eh)) continue;
      if (a.is_leg(ef) && a.leg_label(ef) != b.leg_label(eh)) continue;
      if (emap[ef] == -1 ? eused[eh] != 0 : emap[ef] != eh) continue;
      int of = a.other_flag(f);
      if (of >= 0 && fmap[of] >= 0 && fmap[of] != b.other_flag(h)) continue;
      bool newv = vmap[vf] == -1, newe = emap[ef] == -1;
      fmap[f] = h;
      fused[h] = 1;
      if (newv) vmap[vf] = vh, vused[vh] = 1;
      if (newe) emap[ef] = eh, eused[eh] = 1;
      rec(idx + 1);
      fmap[f] = -1;
      fused[h] = 0;
      if (newv) vmap[vf] = -1, vused[vh] = 0;
      if (newe) emap[ef] = -1, eused[eh] = 0;
    }
  };
  rec(0);
}

}  // namespace

std::vector<Automorphism> automorphisms(const StableGraph& g) {
  std::vector<Automorphism> out;
  isomorphisms(g, g, false, out);
  return out;
}

bool isomorphic(const StableGraph& a, const StableGraph& b) {
  if (a.marks.size() != b.marks.size()) return false;
  for (const auto& [l, e] : a.marks)
    if (!b.marks.count(l)) return false;
  std::vector<Automorphism> out;
  isomorphisms(a, b, true, out);
  return !out.empty();
}

std::vector<Chain> oriented_primitive_cycles(const StableGraph& g) {
  std::vector<int> internal;
  for (int e = 0; e < static_cast<int>(g.num_edges()); ++e)
    if (g.edge_flags[e].size() == 2) internal.push_back(e);
  const int k = static_cast<int>(internal.size());
  if (k > 24) throw DomainError("too many edges for cycle enumeration");
  std::vector<Chain> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> es;
    std::map<int, int> deg;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) {
        int e = internal[i];
        es.push_back(e);
        for (int f : g.edge_flags[e]) ++deg[g.flag_vertex[f]];
      }
    bool ok = true;
    for (const auto& [v, d] : deg)
      if (d != 2) ok = false;
    if (!ok) continue;
    // walk; a connected 2-regular edge set is a single cycle
    Chain c(g.num_edges(), 0);
    std::set<int> remaining(es.begin(), es.end());
    int e = es[0];
    int start = g.flag_vertex[g.edge_flags[e][0]];
    int cur = start;
    while (true) {
      remaining.erase(e);
      const auto& fl = g.edge_flags[e];
      if (g.flag_vertex[fl[0]] == cur) {
        c[e] = 1;
        cur = g.flag_vertex[fl[1]];
      } else {
        c[e] = -1;
        cur = g.flag_vertex[fl[0]];
      }
      if (cur == start) break;
      int nxt = -1;
      for (int x : remaining)
        for (int f : g.edge_flags[x])
          if (g.flag_vertex[f] == cur) nxt = x;
      if (nxt < 0) break;
      e = nxt;
    }
    if (!remaining.empty()) continue;
    out.push_back(c);
    Chain n = c;
    for (auto& x : n) x = -x;
    out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Chain push_chain(const Automorphism& a, const StableGraph& g, const Chain& c) {
  Chain out(c.size(), 0);
  for (std::size_t e = 0; e < c.size(); ++e) {
    if (c[e] == 0) continue;
    int img = a.edge[e];
    int f0 = g.edge_flags[e][0];
    int sign = a.flag[f0] == g.edge_flags[img][0] ? 1 : -1;
    out[img] += sign * c[e];
  }
  return out;
}

namespace {

std::vector<int> cotree_edges(const StableGraph& g) {
  const int V = static_cast<int>(g.num_vertices());
  std::vector<int> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<int> cotree;
  for (int e = 0; e < static_cast<int>(g.num_edges()); ++e) {
    if (g.edge_flags[e].size() != 2) continue;
    int a = find(g.flag_vertex[g.edge_flags[e][0]]), b = find(g.flag_vertex[g.edge_flags[e][1]]);
    if (a == b)
      cotree.push_back(e);
    else
      parent[a] = b;
  }
  return cotree;
}

}  // namespace

bool generates_homology(const StableGraph& g, const std::vector<Chain>& cycles) {
  std::vector<int> cot = cotree_edges(g);
  const std::size_t b = cot.size();
  if (b == 0) return true;
  std::vector<IntVec> cols;
  for (const auto& c : cycles) {
    IntVec v(b);
    bool nz = false;
    for (std::size_t i = 0; i < b; ++i) {
      v[i] = c[cot[i]];
      if (c[cot[i]] != 0) nz = true;
    }
    if (nz) cols.push_back(v);
  }
  if (cols.size() < b) return false;
  return lattice_index(IntMatrix::from_columns(cols, b)) == 1;
}

std::vector<CycleRigidifiedGraph> cycle_rigidifications(const StableGraph& g) {
  const int gg = genus(g);
  const int b = betti_number(g);
  std::vector<Chain> cyc = oriented_primitive_cycles(g);
  // ordered b-tuples of distinct generating cycles
  std::vector<std::vector<Chain>> tuples;
  std::vector<int> idx(b, 0);
  std::function<void(int, std::vector<Chain>&)> rec = [&](int pos, std::vector<Chain>& cur) {
    if (pos == b) {
      if (generates_homology(g, cur)) tuples.push_back(cur);
      return;
    }
    for (const auto& c : cyc) {
      if (std::find(cur.begin(), cur.end(), c) != cur.end()) continue;
      cur.push_back(c);
      rec(pos + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<Chain> cur;
  rec(0, cur);
  // place the nonzero entries; zeros pad to length g, trailing placements first
  std::vector<std::vector<int>> placements;
  std::vector<int> mask(gg, 0);
  std::fill(mask.begin(), mask.begin() + b, 1);
  do placements.push_back(mask);
  while (std::prev_permutation(mask.begin(), mask.end()));
  std::vector<CycleRigidifiedGraph> out;
  Chain zero(g.num_edges(), 0);
  for (const auto& pl : placements)
    for (const auto& t : tuples) {
      CycleRigidifiedGraph r{g, {}};
      std::size_t k = 0;
      for (int i = 0; i < gg; ++i) r.cycles.push_back(pl[i] ? t[k++] : zero);
      out.push_back(std::move(r));
    }
  return out;
}

CycleRigidifiedGraph contract_rigidified(const CycleRigidifiedGraph& g, int e) {
  GraphMorphism m = contract_edge(g.base, e);
  CycleRigidifiedGraph out{m.graph, {}};
  for (const auto& c : g.cycles) {
    Chain d(m.graph.num_edges(), 0);
    for (std::size_t x = 0; x < c.size(); ++x)
      if (m.edge_map[x] >= 0) d[m.edge_map[x]] = c[x];
    out.cycles.push_back(d);
  }
  return out;
}

nlohmann::json to_json(const StableGraph& g) {
  nlohmann::json j;
  j["v"] = 1;
  j["vertices"] = nlohmann::json::array();
  for (std::size_t v = 0; v < g.num_vertices(); ++v) j["vertices"].push_back({{"id", v}, {"genus", g.genus[v]}});
  j["edges"] = nlohmann::json::array();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    nlohmann::json fl = nlohmann::json::array();
    for (int f : g.edge_flags[e]) fl.push_back(g.flag_vertex[f]);
    j["edges"].push_back({{"id", e}, {"flags", fl}, {"bounded", !g.unbounded[e]}, {"leg", g.is_leg(static_cast<int>(e))}});
  }
  j["marks"] = nlohmann::json::object();
  for (const auto& [l, e] : g.marks) j["marks"][std::to_string(l)] = e;
  return j;
}

StableGraph graph_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("v") && j.at("v").get<int>() != 1) throw StructuralError("unsupported graph schema version");
    StableGraph g;
    std::map<long, int> vid, eid;
    for (const auto& v : j.at("vertices")) {
      long id = v.at("id").get<long>();
      if (vid.count(id)) throw StructuralError("duplicate vertex id");
      vid[id] = g.add_vertex(v.value("genus", 0));
    }
    std::map<long, long> leg_label;
    const nlohmann::json marks = j.value("marks", nlohmann::json::object());
    for (const auto& [l, e] : marks.items()) leg_label[e.get<long>()] = std::stol(l);
    for (const auto& e : j.at("edges")) {
      long id = e.at("id").get<long>();
      if (eid.count(id)) throw StructuralError("duplicate edge id");
      std::vector<int> ends;
      for (const auto& f : e.at("flags")) {
        auto it = vid.find(f.get<long>());
        if (it == vid.end()) throw StructuralError("flag references unknown vertex");
        ends.push_back(it->second);
      }
      bool leg = e.value("leg", ends.size() == 1);
      if (leg) {
        if (ends.size() != 1) throw StructuralError("leg must have one flag");
        auto lt = leg_label.find(id);
        if (lt == leg_label.end()) throw StructuralError("leg without mark");
        eid[id] = g.add_leg(ends[0], static_cast<int>(lt->second));
      } else {
        if (ends.size() != 2) throw StructuralError("non-leg edge must have two flags");
        int x = g.add_edge(ends[0], ends[1]);
        if (!e.value("bounded", true)) g.unbounded[x] = 1;
        eid[id] = x;
      }
    }
    for (const auto& [e, l] : leg_label)
      if (!eid.count(e)) throw StructuralError("mark references unknown edge");
    check_structure(g);
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError(std::string("malformed graph json: ") + ex.what());
  }
}

}  // namespace psitrop
