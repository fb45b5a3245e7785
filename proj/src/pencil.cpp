#include "psitrop/pencil.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <queue>

#ifndef PSITROP_FIXTURE_DIR
#define PSITROP_FIXTURE_DIR "fixtures/pencil"
#endif

namespace psitrop {

int ParamStableMapType::num_lengths() const {
  int k = 0;
  for (const auto& e : edges) k = std::max(k, e.len);
  return k;
}

int ParamStableMapType::edge_index(const std::string& id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return static_cast<int>(i);
  return -1;
}

namespace {

std::string id_string(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw DomainError("ids must be strings or integers");
}

}  // namespace

ParamStableMapType param_type_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("v", 0) != 1) throw DomainError("expected a version 1 map type");
  ParamStableMapType t;
  if (j.contains("root")) t.root_vars = j.at("root").get<std::vector<std::string>>();
  if (t.root_vars.size() != 2) throw DomainError("root must name two coordinates");
  for (const auto& e : j.at("edges")) {
    ParamStableMapType::Edge x;
    x.id = id_string(e.at("id"));
    for (const auto& c : e.at("disp")) x.disp.push_back(Int(c.get<long>()));
    if (x.disp.size() != 2) throw DomainError("displacements are plane vectors");
    x.len = e.at("len").get<int>();
    if (x.len < 1) throw DomainError("length indices start at 1");
    if (t.edge_index(x.id) >= 0) throw DomainError("duplicate edge id " + x.id);
    t.edges.push_back(x);
  }
  for (const auto& m : j.at("marks")) {
    ParamStableMapType::Mark x;
    x.id = id_string(m.at("id"));
    for (const auto& p : m.at("path")) x.path.push_back(id_string(p));
    t.marks.push_back(x);
  }
  return t;
}

nlohmann::json to_json(const ParamStableMapType& t) {
  nlohmann::json j;
  j["v"] = 1;
  j["root"] = t.root_vars;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : t.edges)
    j["edges"].push_back({{"id", e.id}, {"disp", {e.disp[0].get_si(), e.disp[1].get_si()}}, {"len", e.len}});
  j["marks"] = nlohmann::json::array();
  for (const auto& m : t.marks) j["marks"].push_back({{"id", m.id}, {"path", m.path}});
  return j;
}

ParamStableMapType load_param_type(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigurationError("cannot open " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(file.string() + ": " + e.what());
  }
  return param_type_from_json(j);
}

IntMatrix evaluation_matrix(const ParamStableMapType& t) {
  const std::size_t cols = 2 + t.num_lengths();
  IntMatrix m(2 * t.marks.size(), cols);
  for (std::size_t i = 0; i < t.marks.size(); ++i) {
    m(2 * i, 0) = 1;
    m(2 * i + 1, 1) = 1;
    for (const auto& id : t.marks[i].path) {
      int e = t.edge_index(id);
      if (e < 0) throw DomainError("mark " + t.marks[i].id + " uses unknown edge " + id);
      const auto& ed = t.edges[e];
      m(2 * i, 1 + ed.len) += ed.disp[0];
      m(2 * i + 1, 1 + ed.len) += ed.disp[1];
    }
  }
  return m;
}

Int edge_multiplicity(const ParamStableMapType& t) {
  IntMatrix m = evaluation_matrix(t);
  if (m.cols() != m.rows() + 1)
    throw DomainError("evaluation matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected one more column than rows");
  return lattice_index(m);
}

SourceMapType source_of(const ParamStableMapType& t) {
  SourceMapType s;
  s.num_vertices = 1;
  std::vector<int> tail(t.edges.size(), -1), head(t.edges.size(), -1);
  std::vector<int> lens;
  for (const auto& e : t.edges) lens.push_back(e.len);
  std::sort(lens.begin(), lens.end());
  if (std::adjacent_find(lens.begin(), lens.end()) != lens.end())
    throw DomainError("edges sharing a length variable have no source graph");
  for (const auto& m : t.marks) {
    int v = 0;
    for (const auto& id : m.path) {
      int e = t.edge_index(id);
      if (e < 0) throw DomainError("mark " + m.id + " uses unknown edge " + id);
      if (tail[e] < 0) {
        tail[e] = v;
        head[e] = s.num_vertices++;
      } else if (tail[e] != v) {
        throw DomainError("edge " + id + " is reached along two different paths");
      }
      v = head[e];
    }
    s.mark_vertex.push_back(v);
  }
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (tail[e] < 0) throw DomainError("edge " + t.edges[e].id + " lies on no mark path");
  // edge order follows length variables so that columns line up
  std::vector<std::size_t> order(t.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t.edges[a].len < t.edges[b].len; });
  for (auto e : order) s.edges.push_back({tail[e], head[e], t.edges[e].disp});
  return s;
}

namespace {

// parent edge (signed: +e+1 forward, -(e+1) backward) of each vertex in a BFS tree
std::vector<int> bfs_tree(const SourceMapType& s, int root, const std::vector<char>& allowed) {
  std::vector<int> via(s.num_vertices, 0);
  std::vector<char> seen(s.num_vertices, 0);
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (std::size_t e = 0; e < s.edges.size(); ++e) {
      if (!allowed[e]) continue;
      const auto& ed = s.edges[e];
      int w = -1, sgn = 0;
      if (ed.tail == v) w = ed.head, sgn = 1;
      else if (ed.head == v) w = ed.tail, sgn = -1;
      if (w < 0 || seen[w]) continue;
      seen[w] = 1;
      via[w] = sgn * static_cast<int>(e + 1);
      q.push(w);
    }
  }
  for (char c : seen)
    if (!c) throw DomainError("source type is not connected");
  return via;
}

// Signed edge sequence from root to v.
std::vector<int> tree_path(const SourceMapType& s, const std::vector<int>& via, int root, int v) {
  std::vector<int> p;
  while (v != root) {
    int t = via[v];
    int e = std::abs(t) - 1;
    p.push_back(t);
    v = t > 0 ? s.edges[e].tail : s.edges[e].head;
  }
  std::reverse(p.begin(), p.end());
  return p;
}

// Position of v in the coordinates (x, y, l_0, ..., l_{E-1}) with base at vertex 0.
std::array<IntVec, 2> position(const SourceMapType& s, const std::vector<int>& via, int v) {
  const std::size_t n = 2 + s.edges.size();
  std::array<IntVec, 2> r{IntVec(n, 0), IntVec(n, 0)};
  r[0][0] = 1;
  r[1][1] = 1;
  for (int t : tree_path(s, via, 0, v)) {
    int e = std::abs(t) - 1;
    for (int c = 0; c < 2; ++c) r[c][2 + e] += t > 0 ? s.edges[e].disp[c] : -s.edges[e].disp[c];
  }
  return r;
}

}  // namespace

IntMatrix cone_lattice(const SourceMapType& s) {
  const std::size_t n = 2 + s.edges.size();
  std::vector<char> all(s.edges.size(), 1);
  auto via = bfs_tree(s, 0, all);
  std::vector<char> in_tree(s.edges.size(), 0);
  for (int v = 1; v < s.num_vertices; ++v) in_tree[std::abs(via[v]) - 1] = 1;
  std::vector<IntVec> rows;
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    if (in_tree[e]) continue;
    auto pt = position(s, via, s.edges[e].tail), ph = position(s, via, s.edges[e].head);
    for (int c = 0; c < 2; ++c) {
      IntVec r(n, 0);
      for (std::size_t k = 0; k < n; ++k) r[k] = pt[c][k] - ph[c][k];
      r[2 + e] += s.edges[e].disp[c];
      rows.push_back(r);
    }
  }
  if (rows.empty()) return IntMatrix::identity(n);
  return integer_kernel(IntMatrix::from_rows(rows, n));
}

namespace {

IntMatrix ev_full(const SourceMapType& s) {
  std::vector<char> all(s.edges.size(), 1);
  auto via = bfs_tree(s, 0, all);
  std::vector<IntVec> rows;
  for (int v : s.mark_vertex) {
    if (v < 0 || v >= s.num_vertices) throw DomainError("mark vertex out of range");
    auto p = position(s, via, v);
    rows.push_back(p[0]);
    rows.push_back(p[1]);
  }
  return IntMatrix::from_rows(rows, 2 + s.edges.size());
}

}  // namespace

Int intrinsic_multiplicity(const SourceMapType& s) {
  IntMatrix lat = cone_lattice(s);
  IntMatrix m = ev_full(s) * lat;
  if (m.cols() != m.rows() + 1) throw DomainError("source type is not a one-parameter family");
  return lattice_index(m);
}

std::vector<TreeChoice> tree_choices(const SourceMapType& s) {
  const int E = static_cast<int>(s.edges.size());
  const int V = s.num_vertices;
  if (E > 24) throw DomainError("too many edges to enumerate spanning trees");
  IntMatrix lat = cone_lattice(s);
  std::vector<char> all(E, 1);
  auto via0 = bfs_tree(s, 0, all);
  std::vector<TreeChoice> out;
  for (unsigned mask = 0; mask < (1u << E); ++mask) {
    if (std::popcount(mask) != V - 1) continue;
    std::vector<char> allowed(E);
    for (int e = 0; e < E; ++e) allowed[e] = (mask >> e) & 1;
    std::vector<int> via;
    try {
      via = bfs_tree(s, 0, allowed);
    } catch (const DomainError&) {
      continue;
    }
    std::vector<int> tree;
    for (int e = 0; e < E; ++e)
      if (allowed[e]) tree.push_back(e);
    for (int root = 0; root < V; ++root) {
      auto rvia = bfs_tree(s, root, allowed);
      TreeChoice c;
      c.root = root;
      c.tree_edges = tree;
      for (std::size_t k = 0; k < tree.size(); ++k)
        c.type.edges.push_back({std::to_string(tree[k]), s.edges[tree[k]].disp, static_cast<int>(k) + 1});
      std::vector<int> flipped_sign(E, 0);
      for (std::size_t m = 0; m < s.mark_vertex.size(); ++m) {
        ParamStableMapType::Mark mk;
        mk.id = std::to_string(m + 1);
        for (int t : tree_path(s, rvia, root, s.mark_vertex[m])) {
          int e = std::abs(t) - 1;
          int sgn = t > 0 ? 1 : -1;
          if (flipped_sign[e] == 0) flipped_sign[e] = sgn;
          mk.path.push_back(std::to_string(e));
        }
        c.type.marks.push_back(mk);
      }
      // a tree edge walked backwards from this root has negated displacement
      for (auto& ed : c.type.edges) {
        int e = std::stoi(ed.id);
        if (flipped_sign[e] < 0)
          for (auto& x : ed.disp) x = -x;
      }
      // coordinates (root position, tree lengths) as functions on the cone lattice
      auto rp = position(s, via0, root);
      std::vector<IntVec> rows{rp[0], rp[1]};
      for (int e : tree) {
        IntVec r(2 + E, 0);
        r[2 + e] = 1;
        rows.push_back(r);
      }
      IntMatrix q = IntMatrix::from_rows(rows, 2 + E) * lat;
      c.unimodular = q.rows() == q.cols() && abs(determinant(q)) == 1;
      out.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

// Number of linear extensions of a poset given by predecessor masks.
std::uint64_t linear_extensions(const std::vector<std::uint32_t>& pred) {
  const std::size_t n = pred.size();
  if (n > 20) throw DomainError("poset too large");
  std::vector<std::uint64_t> dp(std::size_t{1} << n, 0);
  dp[0] = 1;
  for (std::uint32_t m = 0; m < dp.size(); ++m) {
    if (dp[m] == 0) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (!((m >> i) & 1) && (pred[i] & ~m) == 0) dp[m | (1u << i)] += dp[m];
  }
  return dp.back();
}

std::vector<std::pair<int, int>> prufer_tree(const std::vector<int>& code, int n) {
  std::vector<int> deg(n, 1);
  for (int c : code) ++deg[c];
  std::vector<std::pair<int, int>> edges;
  for (int c : code) {
    int leaf = 0;
    while (deg[leaf] != 1) ++leaf;
    edges.push_back({leaf, c});
    --deg[leaf];
    --deg[c];
  }
  int u = -1;
  for (int v = 0; v < n; ++v)
    if (deg[v] == 1) {
      if (u < 0) u = v;
      else edges.push_back({u, v});
    }
  return edges;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts, cur, out);
    cur.pop_back();
  }
}

// Contribution of one labelled tree with fixed numbers of unbounded elevators.
Rat diagram_term(int d, const std::vector<std::pair<int, int>>& tree, const std::vector<int>& inf, bool reversed) {
  // orient and weight each edge: the side S it leaves has weight |S| - inf(S)
  std::vector<std::pair<int, int>> arcs;
  Int mult = 1;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    std::vector<char> side(d, 0);
    std::vector<int> stack{tree[k].first};
    side[tree[k].first] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < tree.size(); ++j) {
        if (j == k) continue;
        auto [a, b] = tree[j];
        int w = a == v ? b : b == v ? a : -1;
        if (w >= 0 && !side[w]) side[w] = 1, stack.push_back(w);
      }
    }
    int size = 0, infs = 0;
    for (int v = 0; v < d; ++v)
      if (side[v]) ++size, infs += inf[v];
    int w = size - infs;
    if (w == 0) return 0;
    if (w > 0) arcs.push_back(tree[k]);
    else arcs.push_back({tree[k].second, tree[k].first});
    mult *= Int(w) * w;
  }
  // elements: floors 0..d-1, bounded elevators, unbounded elevators
  std::vector<std::uint32_t> pred(d + arcs.size(), 0);
  auto less = [&](int a, int b) {
    if (reversed) std::swap(a, b);
    pred[b] |= 1u << a;
  };
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    int e = d + static_cast<int>(k);
    less(arcs[k].first, e);
    less(e, arcs[k].second);
  }
  Int sym = 1;
  for (int v = 0; v < d; ++v) {
    sym *= factorial(inf[v]);
    for (int k = 0; k < inf[v]; ++k) {
      pred.push_back(0);
      less(v, static_cast<int>(pred.size()) - 1);
    }
  }
  // transitive closure is not needed: covering relations generate the order
  Rat r(mult * Int(static_cast<unsigned long>(linear_extensions(pred))), sym);
  r.canonicalize();
  return r;
}

}  // namespace

Int floor_count(int d, int g, bool reversed) {
  if (g != 0) throw UnsupportedScope("floor diagrams of positive genus are not supported");
  if (d < 1) throw DomainError("degree must be positive");
  if (d > 5) throw UnsupportedScope("floor diagrams are enumerated up to degree 5");
  std::vector<std::vector<std::pair<int, int>>> trees;
  if (d == 1) {
    trees.push_back({});
  } else {
    std::vector<int> code(d - 2, 0);
    while (true) {
      trees.push_back(prufer_tree(code, d));
      int i = 0;
      while (i < d - 2 && ++code[i] == d) code[i++] = 0;
      if (i == d - 2) break;
    }
  }
  std::vector<std::vector<int>> infs;
  std::vector<int> cur;
  compositions(d, d, cur, infs);
  std::vector<Rat> partial(trees.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < trees.size(); ++t)
    for (const auto& inf : infs) partial[t] += diagram_term(d, trees[t], inf, reversed);
  Rat total = 0;
  for (const auto& p : partial) total += p;
  total /= factorial(d);
  if (total.get_den() != 1) throw std::logic_error("floor diagram count is not an integer");
  return total.get_num();
}

std::filesystem::path default_corpus() {
  if (const char* env = std::getenv("PSITROP_FIXTURES")) return std::filesystem::path(env) / "pencil";
  return PSITROP_FIXTURE_DIR;
}

PencilReport pencil_degrees(const std::filesystem::path& corpus) {
  const auto manifest = corpus / "corpus.json";
  if (!std::filesystem::exists(manifest)) throw ConfigurationError("missing fixtures: " + manifest.string());
  std::ifstream in(manifest);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(manifest.string() + ": " + e.what());
  }
  PencilReport r;
  const int d = j.value("degree", 3);
  for (const auto& m : j.at("marks")) {
    PencilReport::MarkEntry e;
    e.mark = m.at("mark").get<int>();
    e.fixture = m.at("fixture").get<std::string>();
    e.points = Int(m.at("points").get<long>());
    r.marks.push_back(e);
  }
  std::vector<std::string> absent;
  for (const auto& e : r.marks)
    if (!std::filesystem::exists(corpus / e.fixture)) absent.push_back(e.fixture);
  if (!absent.empty()) {
    std::string msg = "missing fixtures:";
    for (const auto& a : absent) msg += " " + a;
    throw ConfigurationError(msg);
  }
  std::vector<std::exception_ptr> errors(r.marks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < r.marks.size(); ++k) {
    try {
      r.marks[k].multiplicity = edge_multiplicity(load_param_type(corpus / r.marks[k].fixture));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  const Int f = factorial(d);
  r.labeling_factor = 2 * f * f * f;
  r.floor_count = floor_count(d);
  r.covering_degree = r.floor_count * r.labeling_factor;
  r.consistent = !r.marks.empty();
  for (auto& e : r.marks) {
    e.psi_degree = e.points * e.multiplicity;
    Rat q(e.psi_degree, 2 * r.covering_degree);
    q.canonicalize();
    if (&e == &r.marks.front()) r.ratio = q;
    if (q != r.ratio || e.psi_degree != r.labeling_factor) r.consistent = false;
  }
  return r;
}

namespace {

nlohmann::json int_json(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

}  // namespace

nlohmann::json to_json(const PencilReport& r) {
  nlohmann::json j;
  j["floor_count"] = int_json(r.floor_count);
  j["labeling_factor"] = int_json(r.labeling_factor);
  j["covering_degree"] = int_json(r.covering_degree);
  j["psi_degree"] = nlohmann::json::object();
  j["marks"] = nlohmann::json::array();
  for (const auto& e : r.marks) {
    j["psi_degree"][std::to_string(e.mark)] = int_json(e.psi_degree);
    j["marks"].push_back({{"mark", e.mark},
                          {"fixture", e.fixture},
                          {"points", int_json(e.points)},
                          {"multiplicity", int_json(e.multiplicity)},
                          {"psi_degree", int_json(e.psi_degree)}});
  }
  j["ratio"] = to_string(r.ratio);
  j["consistent"] = r.consistent;
  return j;
}

}  // namespace psitrop
