#include "psitrop/genus_one.hpp"

#include <map>

#include "psitrop/psi.hpp"

namespace psitrop {

LineBundleCocycle psi_cocycle(const EllipticFamilySpec& s) {
  // base coordinate on T_- is x = -x_-, so y_+ - y_- = y_shear * x_- = -y_shear * x
  return tp1_bundle(-s.y_shear());
}

Int psi_pullback_degree(const EllipticFamilySpec& s) { return c1_from_cocycle(psi_cocycle(s)); }

IsomFan isom_fan(const Int& a, const Int& b) {
  IsomFan f;
  f.a = a;
  f.b = b;
  f.fan.ambient = 3;
  f.fan.dim = 1;
  std::vector<IntVec> raw{{1, 1, 0}, {1, -1, b}, {-1, -1, b - a}, {-1, 1, -a}};
  for (std::size_t k = 0; k < raw.size(); ++k) {
    f.fan.rays.push_back(primitive(raw[k]));
    f.fan.cones.push_back({static_cast<int>(k)});
    f.fan.weights.push_back(2 * content(raw[k]));
  }
  return f;
}

std::string to_string(CoverClass c) {
  switch (c) {
    case CoverClass::I: return "I";
    case CoverClass::II: return "II";
    case CoverClass::III: return "III";
    case CoverClass::IV: return "IV";
  }
  return "?";
}

std::vector<CoverClassRecord> cover_class_table(int d) {
  if (d < 2) throw DomainError("cover degree must be at least 2");
  const Int L = lcm(2, d);
  const Int f2 = factorial(d - 2);
  std::vector<CoverClassRecord> out;
  CoverClassRecord r;
  r.d = d;
  r.cls = CoverClass::I;
  r.count = f2;
  r.weight = Rat(factorial(d - 1));
  r.source_slope = Rat(2 * L);
  r.branch_slope = Rat(L);
  r.target_ray = BranchRay::A;
  out.push_back(r);
  if (d >= 4) {
    CoverClassRecord s;
    s.d = d;
    s.cls = CoverClass::II;
    s.count = binomial(d - 2, 2) * binomial(d - 2, 2) * factorial(d - 4);
    s.weight = Rat(factorial(d - 4) * (d - 1) * (d - 2) * (d - 3), 3);
    s.source_slope = 0;
    s.branch_slope = Rat(2 * L);
    s.target_ray = BranchRay::A;
    out.push_back(s);
  }
  for (int a = 1; a <= d - 1; ++a) {
    const Int g = gcd(a, d - a), l = lcm(a, d - a);
    for (BranchRay ray : {BranchRay::B, BranchRay::C}) {
      CoverClassRecord s;
      s.d = d;
      s.a = a;
      s.cls = CoverClass::III;
      s.count = 1;
      s.weight = Rat(g * f2 * f2);
      s.source_slope = Rat(L * l) * (Rat(1, a) + Rat(1, d - a));
      s.branch_slope = Rat(L * l);
      s.target_ray = ray;
      out.push_back(s);
    }
  }
  if (d >= 3) {
    CoverClassRecord s;
    s.d = d;
    s.cls = CoverClass::IV;
    s.count = Int(d - 2) * (d - 2) * factorial(d - 3);
    s.weight = Rat(factorial(d - 3) * (d - 1) * (d - 2), 3);
    s.source_slope = 0;
    s.branch_slope = Rat(3 * L);
    s.target_ray = BranchRay::A;
    out.push_back(s);
  }
  for (auto& x : out) {
    x.weight.canonicalize();
    x.source_slope.canonicalize();
  }
  return out;
}

Rat source_degree(int d) {
  Rat s = 0;
  for (const auto& r : cover_class_table(d)) s += r.count * r.weight * r.source_slope;
  const Int L = lcm(2, d), f2 = factorial(d - 2);
  if (s != Rat(2 * L * f2 * f2 * (d - 1) * (d + 1))) throw ConsistencyError("source degree differs from its closed form");
  return s;
}

std::array<Rat, 3> branch_ray_totals(int d) {
  std::array<Rat, 3> t{0, 0, 0};
  for (const auto& r : cover_class_table(d)) t[static_cast<int>(r.target_ray)] += r.count * r.weight * r.branch_slope;
  return t;
}

Rat branch_degree(int d) {
  auto t = branch_ray_totals(d);
  if (t[0] != t[1] || t[1] != t[2]) throw ConsistencyError("branch push-forward differs between rays");
  const Int L = lcm(2, d), f2 = factorial(d - 2);
  Rat closed(L * f2 * f2 * (d - 1) * d * (d + 1), 6);
  closed.canonicalize();
  if (t[0] != closed) throw ConsistencyError("branch degree differs from its closed form");
  return t[0];
}

Rat psi_covers_degree(int d) {
  Rat psi = branch_degree(d) / d * psi_product_degree(4, {1, 0, 0, 0});
  if (psi / source_degree(d) != Rat(1, 12)) throw ConsistencyError("psi degree is not a twelfth of the source degree");
  return psi;
}

RhReport local_rh_check(const CoverDescription& c) {
  check_structure(c.source);
  check_structure(c.target);
  const auto& S = c.source;
  const auto& T = c.target;
  if (c.vertex_image.size() != S.num_vertices() || c.local_degree.size() != S.num_vertices() ||
      c.edge_image.size() != S.num_edges() || c.dilation.size() != S.num_edges())
    throw DomainError("cover data does not match the source graph");
  RhReport r;
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    r.failures.push_back(msg);
  };
  for (std::size_t e = 0; e < S.num_edges(); ++e) {
    int te = c.edge_image[e];
    if (te < 0 || te >= static_cast<int>(T.num_edges())) throw DomainError("edge image out of range");
    if (c.dilation[e] < 1) throw DomainError("dilation factors must be positive");
    if (S.is_leg(static_cast<int>(e)) != T.is_leg(te)) throw DomainError("legs must map to legs");
  }
  for (int x : c.vertex_image)
    if (x < 0 || x >= static_cast<int>(T.num_vertices())) throw DomainError("vertex image out of range");
  for (std::size_t v = 0; v < S.num_vertices(); ++v) {
    const int tv = c.vertex_image[v];
    std::map<int, int> over;  // target flag -> summed dilation
    for (int f : T.flags_at(tv)) over[f] = 0;
    for (int f : S.flags_at(static_cast<int>(v))) {
      int e = S.flag_edge[f];
      int te = c.edge_image[e];
      int tf = -1;
      for (int g : T.edge_flags[te])
        if (T.flag_vertex[g] == tv) tf = g;
      if (tf < 0) throw DomainError("edge image is not incident to the vertex image");
      over[tf] += c.dilation[e];
    }
    for (const auto& [tf, sum] : over)
      if (sum != c.local_degree[v])
        fail(r.harmonic, "vertex " + std::to_string(v) + " is not harmonic");
    const int lhs = 2 * S.genus[v] - 2 + S.valence(static_cast<int>(v));
    const int rhs = c.local_degree[v] * (2 * T.genus[tv] - 2 + T.valence(tv));
    if (lhs != rhs) fail(r.riemann_hurwitz, "Riemann-Hurwitz fails at vertex " + std::to_string(v));
  }
  std::map<int, int> fiber;
  for (std::size_t e = 0; e < S.num_edges(); ++e) fiber[c.edge_image[e]] += c.dilation[e];
  int deg = -1;
  for (std::size_t te = 0; te < T.num_edges(); ++te) {
    int s = fiber[static_cast<int>(te)];
    if (deg < 0) deg = s;
    if (s != deg) fail(r.fibers, "fiber over edge " + std::to_string(te) + " has the wrong degree");
  }
  return r;
}

namespace {

struct CoverBuilder {
  CoverDescription c;
  int left = 0, right = 0, bridge = 0;
  std::map<int, int> target_leg;  // branch point -> target leg
  int next_label = 1;
  CoverBuilder() {
    left = c.target.add_vertex(0);
    right = c.target.add_vertex(0);
    bridge = c.target.add_edge(left, right);
  }
  void branch_leg(int p, int side) { target_leg[p] = c.target.add_leg(side == 0 ? left : right, p); }
  int vertex(int genus, int side, int degree) {
    int v = c.source.add_vertex(genus);
    c.vertex_image.push_back(side == 0 ? left : right);
    c.local_degree.push_back(degree);
    return v;
  }
  void edge(int u, int v, int dil) {
    c.source.add_edge(u, v);
    c.edge_image.push_back(bridge);
    c.dilation.push_back(dil);
  }
  void leg(int v, int p, int dil) {
    c.source.add_leg(v, next_label++);
    c.edge_image.push_back(target_leg.at(p));
    c.dilation.push_back(dil);
  }
};

}  // namespace

CoverDescription representative_cover(CoverClass cls, int d, int a) {
  if (d < 2) throw DomainError("cover degree must be at least 2");
  CoverBuilder b;
  if (cls == CoverClass::III) {
    if (a < 1 || a > d - 1) throw DomainError("class III needs 1 <= a <= d-1");
    b.branch_leg(1, 0);
    b.branch_leg(3, 0);
    b.branch_leg(2, 1);
    b.branch_leg(4, 1);
    int x = b.vertex(0, 0, d), w = b.vertex(0, 1, d);
    b.edge(x, w, a);
    b.edge(x, w, d - a);
    for (auto [v, pd, pr] : {std::tuple{x, 1, 3}, std::tuple{w, 2, 4}}) {
      b.leg(v, pd, d);
      b.leg(v, pr, 2);
      for (int k = 0; k < d - 2; ++k) b.leg(v, pr, 1);
    }
    return b.c;
  }
  b.branch_leg(1, 0);
  b.branch_leg(2, 0);
  b.branch_leg(3, 1);
  b.branch_leg(4, 1);
  auto simple = [&](int x, int count) {
    for (int k = 0; k < count; ++k) {
      int z = b.vertex(0, 1, 1);
      b.edge(x, z, 1);
      b.leg(z, 3, 1);
      b.leg(z, 4, 1);
    }
  };
  switch (cls) {
    case CoverClass::I: {
      int x = b.vertex(0, 0, d);
      b.leg(x, 1, d);
      b.leg(x, 2, d);
      int y = b.vertex(0, 1, 2);
      b.edge(x, y, 1);
      b.edge(x, y, 1);
      b.leg(y, 3, 2);
      b.leg(y, 4, 2);
      simple(x, d - 2);
      break;
    }
    case CoverClass::II: {
      if (d < 4) throw DomainError("class II needs d >= 4");
      int x = b.vertex(1, 0, d);
      b.leg(x, 1, d);
      b.leg(x, 2, d);
      int y1 = b.vertex(0, 1, 2), y2 = b.vertex(0, 1, 2);
      b.edge(x, y1, 2);
      b.edge(x, y2, 2);
      b.leg(y1, 3, 2);
      b.leg(y1, 4, 1);
      b.leg(y1, 4, 1);
      b.leg(y2, 3, 1);
      b.leg(y2, 3, 1);
      b.leg(y2, 4, 2);
      simple(x, d - 4);
      break;
    }
    case CoverClass::IV: {
      if (d < 3) throw DomainError("class IV needs d >= 3");
      int x = b.vertex(1, 0, d);
      b.leg(x, 1, d);
      b.leg(x, 2, d);
      int y = b.vertex(0, 1, 3);
      b.edge(x, y, 3);
      b.leg(y, 3, 2);
      b.leg(y, 3, 1);
      b.leg(y, 4, 2);
      b.leg(y, 4, 1);
      simple(x, d - 3);
      break;
    }
    default:
      break;
  }
  return b.c;
}

nlohmann::json to_json(const CoverClassRecord& r) {
  nlohmann::json j;
  j["class"] = to_string(r.cls);
  j["d"] = r.d;
  if (r.cls == CoverClass::III) j["a"] = r.a;
  j["count"] = r.count.get_str();
  j["weight"] = to_string(r.weight);
  j["source_slope"] = to_string(r.source_slope);
  j["branch_slope"] = to_string(r.branch_slope);
  j["target_ray"] = r.target_ray == BranchRay::A ? "12|34" : r.target_ray == BranchRay::B ? "13|24" : "14|23";
  return j;
}

}  // namespace psitrop
