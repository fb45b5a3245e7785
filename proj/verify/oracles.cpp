#include "oracles.hpp"

#include <algorithm>
#include <queue>

namespace psitrop::oracle {

Rat string_equation(std::vector<int> a) {
  const int n = static_cast<int>(a.size());
  int sum = 0;
  for (int x : a) {
    if (x < 0) return 0;
    sum += x;
  }
  if (n < 3 || sum != n - 3) return 0;
  if (n == 3) return 1;
  auto zero = std::find(a.begin(), a.end(), 0);
  a.erase(zero);
  Rat total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    auto b = a;
    --b[j];
    total += string_equation(b);
  }
  return total;
}

Int kontsevich(int d) {
  std::vector<Int> N(d + 1, 0);
  N[1] = 1;
  for (int e = 2; e <= d; ++e) {
    Int s = 0;
    for (int a = 1; a < e; ++a) {
      int b = e - a;
      Int t = N[a] * N[b] * a * a * b;
      s += t * (Int(b) * binomial(3 * e - 4, 3 * a - 2) - Int(a) * binomial(3 * e - 4, 3 * a - 1));
    }
    N[e] = s;
  }
  return N[d];
}

namespace {
Int l2(int d) { return d % 2 == 0 ? Int(d) : Int(2 * d); }
}  // namespace

Int covers_source(int d) {
  Int f = factorial(d - 2);
  return 2 * l2(d) * f * f * (d - 1) * (d + 1);
}

Rat covers_branch(int d) {
  Int f = factorial(d - 2);
  Rat r(l2(d) * f * f * (d - 1) * d * (d + 1), 6);
  r.canonicalize();
  return r;
}

Rat covers_psi(int d) {
  Int f = factorial(d - 2);
  Rat r(l2(d) * f * f * (d - 1) * (d + 1), 6);
  r.canonicalize();
  return r;
}

std::set<int> labels_beyond(const StableGraph& g, int flag) {
  std::set<int> out;
  std::vector<char> seen(g.num_vertices(), 0);
  const int start = g.flag_vertex[g.other_flag(flag)];
  seen[g.flag_vertex[flag]] = 1;
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (std::size_t f = 0; f < g.num_flags(); ++f) {
      if (g.flag_vertex[f] != v) continue;
      int e = g.flag_edge[f];
      if (g.is_leg(e)) {
        for (const auto& [label, leg] : g.marks)
          if (leg == e) out.insert(label);
        continue;
      }
      int w = g.flag_vertex[g.other_flag(static_cast<int>(f))];
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return out;
}

Rat split_distance(const StableGraph& tree, const std::map<int, Rat>& lengths, int i, int j) {
  Rat d = 0;
  for (const auto& [e, l] : lengths) {
    auto side = labels_beyond(tree, tree.edge_flags[e][0]);
    if (side.count(i) != side.count(j)) d += l;
  }
  return d;
}

namespace {

// Directed edge counts (+1 along edge_flags[e][0] -> [1]) of the path between two vertices.
std::map<int, int> inner_path(const StableGraph& g, const std::set<int>& inner, int from, int to) {
  std::vector<int> via(g.num_vertices(), -1);
  std::vector<char> seen(g.num_vertices(), 0);
  std::queue<int> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : inner) {
      const auto& fl = g.edge_flags[e];
      for (int s = 0; s < 2; ++s) {
        if (g.flag_vertex[fl[s]] != v) continue;
        int w = g.flag_vertex[fl[1 - s]];
        if (seen[w]) continue;
        seen[w] = 1;
        via[w] = fl[s];
        q.push(w);
      }
    }
  }
  if (!seen[to]) throw DomainError("oracle: endpoints are not joined by inner edges");
  std::map<int, int> out;
  for (int v = to; v != from;) {
    int f = via[v];
    int e = g.flag_edge[f];
    out[e] += f == g.edge_flags[e][0] ? 1 : -1;
    v = g.flag_vertex[f];
  }
  return out;
}

Rat overlap(const std::map<int, int>& A, const std::map<int, int>& B, const std::map<int, Rat>& lengths) {
  Rat s = 0;
  for (const auto& [e, k] : A) {
    auto it = B.find(e);
    if (it == B.end() || k == 0 || it->second == 0) continue;
    s += lengths.at(e) * k * it->second;
  }
  return s;
}

}  // namespace

// Overlap of the two walks in the universal cover: the part before the crossed
// edge only meets the part before it, likewise after.
Rat signed_overlap(const StableGraph& g, const std::set<int>& inner, const std::map<int, Rat>& lengths, int a_from,
                   int a_to, int b_from, int b_to, int through) {
  if (through < 0)
    return overlap(inner_path(g, inner, g.flag_vertex[a_from], g.flag_vertex[a_to]),
                   inner_path(g, inner, g.flag_vertex[b_from], g.flag_vertex[b_to]), lengths);
  const int out = g.flag_vertex[through], in = g.flag_vertex[g.other_flag(through)];
  Rat s = lengths.at(g.flag_edge[through]);
  s += overlap(inner_path(g, inner, g.flag_vertex[a_from], out), inner_path(g, inner, g.flag_vertex[b_from], out), lengths);
  s += overlap(inner_path(g, inner, in, g.flag_vertex[a_to]), inner_path(g, inner, in, g.flag_vertex[b_to]), lengths);
  return s;
}

}  // namespace psitrop::oracle
