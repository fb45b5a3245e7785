#include "psitrop/crossratio.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "psitrop/moduli.hpp"

namespace psitrop {

namespace {

Int slope(const std::map<int, Int>& w, int f) {
  auto it = w.find(f);
  return it == w.end() ? Int(0) : it->second;
}

int flag_count(const StableGraph& g) { return static_cast<int>(g.num_flags()); }

}  // namespace

std::vector<int> visited_vertices(const StableGraph& g, const ThickenedPath& p) {
  if (p.start_flag < 0 || p.start_flag >= flag_count(g)) throw DomainError("start flag out of range");
  if (p.end_flag < 0 || p.end_flag >= flag_count(g)) throw DomainError("end flag out of range");
  std::vector<int> vs{g.flag_vertex[p.start_flag]};
  for (int f : p.steps) {
    if (f < 0 || f >= flag_count(g)) throw DomainError("path flag out of range");
    if (g.flag_vertex[f] != vs.back()) throw DomainError("path step leaves from the wrong vertex");
    int e = g.flag_edge[f];
    if (g.is_leg(e) || g.unbounded[e]) throw DomainError("path runs along an unbounded edge");
    vs.push_back(g.flag_vertex[g.other_flag(f)]);
  }
  if (g.flag_vertex[p.end_flag] != vs.back()) throw DomainError("end flag is not at the final vertex");
  return vs;
}

void validate_datum(const StableGraph& g, const CrossRatioDatum& c) {
  const auto& p = c.path;
  auto vs = visited_vertices(g, p);
  const std::size_t m = p.steps.size();
  for (int v : vs)
    if (g.genus[v] != 0) throw DomainError("path passes through a positive-genus vertex");
  if (m == 0) {
    if (p.start_flag == p.end_flag) throw DomainError("constant path needs distinct flags");
  } else {
    if (p.start_flag == p.steps.front()) throw DomainError("start flag equals the first tangent flag");
    if (p.end_flag == g.other_flag(p.steps.back())) throw DomainError("end flag equals the last tangent flag");
    for (std::size_t i = 1; i < m; ++i)
      if (p.steps[i] == g.other_flag(p.steps[i - 1])) throw DomainError("path backtracks along an edge");
  }
  const auto& w = c.form.slopes;
  if (w.size() != vs.size()) throw DomainError("one-form needs one slope map per visited vertex");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Int sum = 0;
    for (const auto& [f, s] : w[i]) {
      if (f < 0 || f >= flag_count(g) || g.flag_vertex[f] != vs[i]) throw DomainError("slope on a flag away from the vertex");
      sum += s;
    }
    if (sum != 0) throw DomainError("slopes at a vertex must sum to zero");
  }
  if (slope(w.front(), p.start_flag) != 0 || slope(w.back(), p.end_flag) != 0)
    throw DomainError("slopes along the start and end flags must vanish");
  for (std::size_t i = 0; i < m; ++i)
    if (slope(w[i], p.steps[i]) != -slope(w[i + 1], g.other_flag(p.steps[i])))
      throw DomainError("slopes across a traversed edge do not match");
  if (c.kind == DatumKind::vertex) {
    if (m != 0) throw DomainError("vertex datum must have a constant path");
    int plus = 0, minus = 0, other = 0;
    for (const auto& [f, s] : w[0]) {
      if (s == 1) ++plus;
      else if (s == -1) ++minus;
      else if (s != 0) ++other;
    }
    if (plus != 1 || minus != 1 || other != 0) throw DomainError("vertex datum needs slopes +1 and -1 on two flags");
  } else if (c.kind == DatumKind::edge) {
    if (m != 1) throw DomainError("edge datum must traverse exactly one edge");
    if (slope(w[0], p.steps[0]) != 1) throw DomainError("edge datum needs slope 1 along its edge");
    auto count_side = [&](const std::map<int, Int>& ws, int a, int b) {
      int k = 0;
      for (const auto& [f, s] : ws)
        if (f != a && f != b && s != 0) ++k;
      return k;
    };
    if (count_side(w[0], p.start_flag, p.steps[0]) != 1 || count_side(w[1], p.end_flag, g.other_flag(p.steps[0])) != 1)
      throw DomainError("edge datum needs exactly one further nonzero slope at each end");
  }
}

CrossRatioDatum vertex_datum(const StableGraph& g, int fs, int fe, int fm, int fp) {
  CrossRatioDatum c;
  c.kind = DatumKind::vertex;
  c.path.start_flag = fs;
  c.path.end_flag = fe;
  std::map<int, Int> w;
  w[fm] = -1;
  w[fp] = 1;
  c.form.slopes = {w};
  if (std::set<int>{fs, fe, fm, fp}.size() != 4) throw DomainError("vertex datum needs four distinct flags");
  validate_datum(g, c);
  return c;
}

CrossRatioDatum edge_datum(const StableGraph& g, int out, int fs, int fe, int fm, int fp) {
  CrossRatioDatum c;
  c.kind = DatumKind::edge;
  c.path.start_flag = fs;
  c.path.steps = {out};
  c.path.end_flag = fe;
  const int in = g.other_flag(out);
  if (fs == fm || fe == fp || fm == out || fp == in) throw DomainError("edge datum flags must be distinct");
  std::map<int, Int> w0, w1;
  w0[out] = 1;
  w0[fm] = -1;
  w1[in] = -1;
  w1[fp] = 1;
  c.form.slopes = {w0, w1};
  validate_datum(g, c);
  return c;
}

std::map<int, Int> lift_coefficients(const CrossRatioDatum& c, const StableGraph& coarse, const Specialization& s) {
  validate_datum(coarse, c);
  GraphMorphism mor = contract_edges(s.fine, s.contracted);
  if (!(mor.graph == coarse)) throw DomainError("type does not specialize to the datum's graph");
  const StableGraph& fine = s.fine;
  std::vector<int> inv(coarse.num_flags(), -1);
  for (std::size_t f = 0; f < mor.flag_map.size(); ++f)
    if (mor.flag_map[f] >= 0) inv[mor.flag_map[f]] = static_cast<int>(f);
  std::set<int> contracted(s.contracted.begin(), s.contracted.end());
  const auto& p = c.path;
  const auto vs = visited_vertices(coarse, p);
  const std::size_t m = p.steps.size();
  std::map<int, Int> coef;
  for (std::size_t i = 0; i <= m; ++i) {
    const int v = vs[i];
    const auto& w = c.form.slopes[i];
    const int fin = i == 0 ? p.start_flag : coarse.other_flag(p.steps[i - 1]);
    const int fout = i == m ? p.end_flag : p.steps[i];
    const int a = fine.flag_vertex[inv[fin]], b = fine.flag_vertex[inv[fout]];
    // contracted tree inside v: adjacency over contracted edges
    auto neighbours = [&](int x) {
      std::vector<std::pair<int, int>> out;
      for (int f : fine.flags_at(x)) {
        int e = fine.flag_edge[f];
        if (!contracted.count(e)) continue;
        out.push_back({fine.flag_vertex[fine.other_flag(f)], e});
      }
      return out;
    };
    // path a -> b
    std::map<int, std::pair<int, int>> parent;  // vertex -> (prev vertex, edge)
    std::queue<int> q;
    q.push(a);
    parent[a] = {-1, -1};
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto [y, e] : neighbours(x))
        if (!parent.count(y)) {
          parent[y] = {x, e};
          q.push(y);
        }
    }
    if (!parent.count(b)) throw DomainError("lift of the path is disconnected");
    std::vector<std::pair<int, int>> walk;  // (from vertex, edge), a to b
    for (int x = b; x != a; x = parent[x].first) walk.push_back({parent[x].first, parent[x].second});
    std::reverse(walk.begin(), walk.end());
    for (auto [x, e] : walk) {
      // side of e containing x
      std::set<int> side{x};
      std::queue<int> qq;
      qq.push(x);
      while (!qq.empty()) {
        int y = qq.front();
        qq.pop();
        for (auto [z, f] : neighbours(y))
          if (f != e && !side.count(z)) {
            side.insert(z);
            qq.push(z);
          }
      }
      Int sl = 0;
      for (const auto& [g0, val] : w)
        if (side.count(fine.flag_vertex[inv[g0]])) sl -= val;
      coef[e] += sl;
    }
    (void)v;
    if (i < m) coef[fine.flag_edge[inv[p.steps[i]]]] += slope(w, p.steps[i]);
  }
  for (auto it = coef.begin(); it != coef.end();)
    it = it->second == 0 ? coef.erase(it) : std::next(it);
  return coef;
}

Rat evaluate(const CrossRatioDatum& c, const StableGraph& coarse, const Specialization& s,
             const std::map<int, Rat>& lengths) {
  Rat v = 0;
  for (const auto& [e, k] : lift_coefficients(c, coarse, s)) {
    auto it = lengths.find(e);
    if (it == lengths.end()) throw DomainError("missing length for edge " + std::to_string(e));
    v += k * it->second;
  }
  return v;
}

std::vector<Specialization> tree_specializations(const StableGraph& g, int max_edges) {
  const int base = static_cast<int>(g.bounded_edges().size());
  std::vector<int> verts;
  std::vector<std::vector<std::vector<Split>>> options;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.genus[v] != 0) continue;
    int k = g.valence(static_cast<int>(v));
    if (k < 4) continue;
    verts.push_back(static_cast<int>(v));
    options.push_back(all_tree_types(k));
  }
  std::vector<Specialization> out;
  std::vector<const std::vector<Split>*> pick(verts.size(), nullptr);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int budget) {
    if (idx == verts.size()) {
      Specialization s;
      s.fine = g;
      for (std::size_t t = 0; t < verts.size(); ++t) {
        const int v = verts[t];
        const std::vector<int> fl = g.flags_at(v);
        SplitTree tr = tree_from_splits(static_cast<int>(fl.size()), *pick[t]);
        std::vector<int> vid(tr.num_vertices(), v);
        for (std::size_t u = 1; u < tr.num_vertices(); ++u) vid[u] = s.fine.add_vertex(0);
        for (std::size_t l = 0; l < fl.size(); ++l) s.fine.flag_vertex[fl[l]] = vid[tr.leg_vertex[l]];
        std::vector<std::pair<int, int>> ends(tr.edges.size());
        for (std::size_t u = 0; u < tr.num_vertices(); ++u)
          for (auto [w, e] : tr.adj[u])
            if (static_cast<int>(u) < w) ends[e] = {static_cast<int>(u), w};
        for (auto [x, y] : ends) s.contracted.push_back(s.fine.add_edge(vid[x], vid[y]));
      }
      out.push_back(std::move(s));
      return;
    }
    for (const auto& t : options[idx]) {
      if (static_cast<int>(t.size()) > budget) continue;
      pick[idx] = &t;
      rec(idx + 1, budget - static_cast<int>(t.size()));
    }
  };
  if (base <= max_edges) rec(0, max_edges - base);
  return out;
}

std::vector<std::pair<Int, CrossRatioDatum>> decompose_primitive(const StableGraph& g, const CrossRatioDatum& c) {
  validate_datum(g, c);
  std::vector<std::pair<Int, CrossRatioDatum>> out;
  const auto& p = c.path;
  const std::size_t m = p.steps.size();
  if (m == 0) {
    std::vector<std::pair<int, Int>> pos, neg;
    for (const auto& [f, s] : c.form.slopes[0]) {
      if (s > 0) pos.push_back({f, s});
      if (s < 0) neg.push_back({f, -s});
    }
    std::size_t a = 0, b = 0;
    while (a < pos.size() && b < neg.size()) {
      Int k = std::min(pos[a].second, neg[b].second);
      out.push_back({k, vertex_datum(g, p.start_flag, p.end_flag, neg[b].first, pos[a].first)});
      pos[a].second -= k;
      neg[b].second -= k;
      if (pos[a].second == 0) ++a;
      if (neg[b].second == 0) ++b;
    }
    return out;
  }
  const auto vs = visited_vertices(g, p);
  const int fplus = p.steps[m - 1];
  const int fprime = g.other_flag(fplus);
  const int fminus = m == 1 ? p.start_flag : g.other_flag(p.steps[m - 2]);
  int h = -1;
  for (int f : g.flags_at(vs[m - 1]))
    if (f != fminus && f != fplus && (h < 0 || (h == fprime && f != fprime))) h = f;
  if (h < 0) throw DomainError("no free flag at the penultimate vertex");
  const auto& wm = c.form.slopes[m];
  for (int f : g.flags_at(vs[m])) {
    if (f == p.end_flag || f == fprime) continue;
    Int k = slope(wm, f);
    if (k == 0) continue;
    out.push_back({k, edge_datum(g, fplus, fminus, p.end_flag, h, f)});
  }
  CrossRatioDatum r;
  r.path.start_flag = p.start_flag;
  r.path.steps.assign(p.steps.begin(), p.steps.end() - 1);
  r.path.end_flag = fplus;
  r.form.slopes.assign(c.form.slopes.begin(), c.form.slopes.end() - 1);
  auto& wl = r.form.slopes.back();
  Int carry = slope(wl, fplus);
  wl.erase(fplus);
  wl[h] = slope(wl, h) + carry;
  if (wl[h] == 0) wl.erase(h);
  for (auto& t : decompose_primitive(g, r)) out.push_back(std::move(t));
  return out;
}

RatVec pullback_to_distance(const StableGraph& star, const CrossRatioDatum& c, int n) {
  if (star.num_vertices() != 1 || !star.bounded_edges().empty() || static_cast<int>(star.marks.size()) != n)
    throw DomainError("pull-back to distances needs the n-marked star tree");
  CrossRatioDatum v = c;
  v.kind = DatumKind::vertex;
  validate_datum(star, v);
  int fm = -1, fp = -1;
  for (const auto& [f, s] : c.form.slopes[0]) {
    if (s == 1) fp = f;
    if (s == -1) fm = f;
  }
  const int i = star.leg_label(star.flag_edge[c.path.start_flag]);
  const int l = star.leg_label(star.flag_edge[c.path.end_flag]);
  const int k = star.leg_label(star.flag_edge[fm]);
  const int j = star.leg_label(star.flag_edge[fp]);
  auto idx = [n](int a, int b) {
    if (a > b) std::swap(a, b);
    return (a - 1) * n - (a - 1) * a / 2 + (b - a - 1);
  };
  RatVec out(static_cast<std::size_t>(n * (n - 1) / 2), Rat(0));
  out[idx(i, j)] += Rat(1, 2);
  out[idx(k, l)] += Rat(1, 2);
  out[idx(i, k)] -= Rat(1, 2);
  out[idx(j, l)] -= Rat(1, 2);
  return out;
}

nlohmann::json to_json(const CrossRatioDatum& c) {
  nlohmann::json j;
  j["start_flag"] = c.path.start_flag;
  j["steps"] = c.path.steps;
  j["end_flag"] = c.path.end_flag;
  j["slopes"] = nlohmann::json::array();
  for (const auto& w : c.form.slopes) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [f, s] : w) o[std::to_string(f)] = s.get_str();
    j["slopes"].push_back(o);
  }
  j["kind"] = c.kind == DatumKind::vertex ? "vertex" : c.kind == DatumKind::edge ? "edge" : "general";
  return j;
}

CrossRatioDatum datum_from_json(const nlohmann::json& j) {
  try {
    CrossRatioDatum c;
    c.path.start_flag = j.at("start_flag").get<int>();
    c.path.end_flag = j.at("end_flag").get<int>();
    c.path.steps = j.value("steps", std::vector<int>{});
    for (const auto& o : j.at("slopes")) {
      std::map<int, Int> w;
      for (const auto& [k, v] : o.items()) {
        Int x;
        if (v.is_string()) {
          if (x.set_str(v.get<std::string>(), 10) != 0) throw DomainError("bad slope");
        } else {
          x = v.get<long>();
        }
        w[std::stoi(k)] = x;
      }
      c.form.slopes.push_back(w);
    }
    std::string kind = j.value("kind", "general");
    if (kind == "vertex") c.kind = DatumKind::vertex;
    else if (kind == "edge") c.kind = DatumKind::edge;
    else if (kind == "general") c.kind = DatumKind::general;
    else throw DomainError("unknown datum kind " + kind);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed datum json: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed datum json: flag keys must be integers");
  }
}

}  // namespace psitrop
