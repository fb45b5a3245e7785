#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "criteria.hpp"
#include "psitrop/crossratio.hpp"
#include "psitrop/genus_one.hpp"
#include "psitrop/pencil.hpp"
#include "psitrop/psi.hpp"

using namespace psitrop;
using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integers as numbers while they fit, otherwise decimal strings; fractions as "p/q".
json num(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

json num(Rat x) {
  x.canonicalize();
  if (x.get_den() == 1) return num(Int(x.get_num()));
  return to_string(x);
}

json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InputError(file + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string digest(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

json matrix_json(const IntMatrix& A) {
  json rows = json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    json r = json::array();
    for (const auto& x : A.row(i)) r.push_back(x.get_str());
    rows.push_back(r);
  }
  return rows;
}

// command -> module operations it reaches
const std::vector<std::pair<std::string, std::vector<std::string>>>& registry() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> r{
      {"graph validate", {"graph-core:validate", "graph-core:genus"}},
      {"graph automorphisms", {"graph-core:automorphisms"}},
      {"graph contract", {"graph-core:contract_edge"}},
      {"graph rigidify", {"graph-core:cycle_rigidifications"}},
      {"moduli info", {"moduli-fan:build_m0n", "tropical-cycles:check_balancing"}},
      {"moduli point", {"moduli-fan:distance_coordinates", "moduli-fan:point"}},
      {"moduli forget", {"moduli-fan:forgetful_map"}},
      {"moduli atlas", {"moduli-fan:atlas_cone"}},
      {"crossratio eval", {"cross-ratio:evaluate"}},
      {"crossratio decompose", {"cross-ratio:decompose_primitive"}},
      {"crossratio distance", {"cross-ratio:pullback_to_distance"}},
      {"cycles balance", {"tropical-cycles:check_balancing"}},
      {"cycles intersect", {"tropical-cycles:divisor_intersect"}},
      {"cycles push", {"tropical-cycles:push_forward"}},
      {"cycles degree", {"tropical-cycles:degree"}},
      {"cycles index", {"tropical-cycles:lattice_index"}},
      {"psi degree", {"psi-classes:psi_product_degree"}},
      {"psi dilaton", {"psi-classes:dilaton_pushforward"}},
      {"psi pullback", {"psi-classes:pullback_check"}},
      {"psi representative", {"psi-classes:psi_representative"}},
      {"covers table", {"genus-one-families:cover_class_table"}},
      {"covers degrees",
       {"genus-one-families:source_degree", "genus-one-families:branch_degree",
        "genus-one-families:psi_covers_degree"}},
      {"covers rh", {"genus-one-families:local_rh_check"}},
      {"elliptic psi", {"genus-one-families:psi_pullback_degree", "tropical-cycles:c1_from_cocycle"}},
      {"elliptic isom", {"genus-one-families:isom_fan"}},
      {"pencil mult", {"stable-maps-pencil:edge_multiplicity"}},
      {"pencil matrix", {"stable-maps-pencil:evaluation_matrix"}},
      {"pencil trees", {"stable-maps-pencil:tree_choices", "stable-maps-pencil:intrinsic_multiplicity"}},
      {"pencil degrees", {"stable-maps-pencil:pencil_degrees"}},
      {"floors count", {"stable-maps-pencil:floor_count"}},
      {"fixtures list", {"cli:fixtures"}},
      {"verify-all", {"cli:run"}},
      {"commands", {"cli:run"}},
  };
  return r;
}

CoverClass parse_class(const std::string& s) {
  if (s == "I") return CoverClass::I;
  if (s == "II") return CoverClass::II;
  if (s == "III") return CoverClass::III;
  if (s == "IV") return CoverClass::IV;
  throw InputError("unknown cover class " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psitrop: tropical moduli fans, cross ratios and psi classes"};
  app.require_subcommand(1);
  bool as_json = true;
  std::uint64_t seed = verify::Options{}.seed;
  app.add_flag("--json", as_json, "JSON output (the only format)");
  app.add_option("--seed", seed, "seed for property-test sampling");

  int exit_code = 0;
  std::function<void()> action;
  auto on = [&](CLI::App* sub, std::function<void()> f) { sub->callback([&action, f] { action = f; }); };

  // graph
  auto* graph = app.add_subcommand("graph", "stable graphs");
  graph->require_subcommand(1);
  std::string graph_file;
  int edge = -1;
  {
    auto* s = graph->add_subcommand("validate", "connectivity, stability and genus");
    s->add_option("--graph", graph_file)->required();
    on(s, [&] {
      auto g = graph_from_json(read_json(graph_file));
      auto r = validate(g);
      emit({{"connected", r.connected}, {"unstable_vertices", r.unstable_vertices}, {"genus", genus(g)},
            {"betti", betti_number(g)}});
      if (!r.ok()) exit_code = 1;
    });
    s = graph->add_subcommand("automorphisms", "number of automorphisms");
    s->add_option("--graph", graph_file)->required();
    on(s, [&] { emit(automorphisms(graph_from_json(read_json(graph_file))).size()); });
    s = graph->add_subcommand("contract", "contract one bounded edge");
    s->add_option("--graph", graph_file)->required();
    s->add_option("--edge", edge)->required();
    on(s, [&] {
      auto g = graph_from_json(read_json(graph_file));
      if (edge < 0 || edge >= static_cast<int>(g.num_edges()) || !g.is_bounded(edge) || g.is_leg(edge))
        throw InputError("not a bounded edge: " + std::to_string(edge));
      emit(to_json(contract_edge(g, edge).graph));
    });
    s = graph->add_subcommand("rigidify", "cycle rigidifications");
    s->add_option("--graph", graph_file)->required();
    on(s, [&] {
      json out = json::array();
      for (const auto& r : cycle_rigidifications(graph_from_json(read_json(graph_file)))) out.push_back(r.cycles);
      emit(out);
    });
  }

  // moduli
  auto* moduli = app.add_subcommand("moduli", "the fan M0,n");
  moduli->require_subcommand(1);
  int n = 0;
  std::string type_file, lengths;
  {
    auto* s = moduli->add_subcommand("info", "rays, top cones, dimension");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 12));
    on(s, [&] {
      auto m = build_m0n(n);
      emit({{"rays", m.rays.size()},
            {"top_cones", m.top_cones.size()},
            {"dimension", m.dim()},
            {"ambient", m.ambient()},
            {"balanced", check_balancing(m.fundamental_class()).balanced}});
    });
    s = moduli->add_subcommand("point", "distance vector and point of a metric tree");
    s->add_option("--type", type_file, "graph JSON of a marked tree")->required();
    s->add_option("--lengths", lengths, "edge lengths in bounded-edge order, comma separated")->required();
    on(s, [&] {
      MetricGraphPoint p{graph_from_json(read_json(type_file)), {}};
      auto b = p.type.bounded_edges();
      auto vals = split_list(lengths);
      if (vals.size() != b.size()) throw InputError("expected " + std::to_string(b.size()) + " lengths");
      for (std::size_t k = 0; k < b.size(); ++k) p.lengths[b[k]] = parse_rational(vals[k]);
      check_point(p);
      const int nn = static_cast<int>(p.type.marks.size());
      auto m = build_m0n(nn);
      auto d = distance_coordinates(p, nn);
      json pairs = json::array(), dist = json::array(), pt = json::array();
      for (auto [i, j] : m.pairs) pairs.push_back({i, j});
      for (const auto& x : d.doubled_coords) dist.push_back(to_string(x));
      for (const auto& x : m.point(d.doubled_coords)) pt.push_back(to_string(x));
      emit({{"n", nn}, {"pairs", pairs}, {"distances", dist}, {"point", pt}});
    });
    s = moduli->add_subcommand("forget", "lattice map forgetting the last leg of M0,n+1");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 12));
    on(s, [&] {
      auto f = forgetful_map(n);
      emit({{"matrix", matrix_json(f.lattice_map)}, {"pair_projection", f.pair_projection}});
    });
    s = moduli->add_subcommand("atlas", "atlas cone of each cycle rigidification");
    s->add_option("--graph", graph_file)->required();
    on(s, [&] {
      json out = json::array();
      for (const auto& r : cycle_rigidifications(graph_from_json(read_json(graph_file)))) {
        auto c = atlas_cone(r);
        out.push_back({{"cycles", r.cycles}, {"coordinates", c.coordinates}, {"dim", c.dim()}});
      }
      emit(out);
    });
  }

  // cross ratios
  auto* cr = app.add_subcommand("crossratio", "cross-ratio data");
  cr->require_subcommand(1);
  std::string datum_file, point_file;
  {
    auto* s = cr->add_subcommand("eval", "evaluate a datum at a point");
    s->add_option("--datum", datum_file, "{graph, datum}")->required();
    s->add_option("--point", point_file, "{fine, contracted, lengths}")->required();
    on(s, [&] {
      auto dj = read_json(datum_file), pj = read_json(point_file);
      StableGraph coarse;
      CrossRatioDatum c;
      Specialization sp;
      std::map<int, Rat> len;
      try {
        coarse = graph_from_json(dj.at("graph"));
        c = datum_from_json(dj.at("datum"));
        sp.fine = graph_from_json(pj.at("fine"));
        sp.contracted = pj.value("contracted", std::vector<int>{});
        for (const auto& [k, v] : pj.at("lengths").items())
          len[std::stoi(k)] = v.is_string() ? parse_rational(v.get<std::string>()) : Rat(v.get<long>());
      } catch (const json::exception& e) {
        throw InputError(e.what());
      } catch (const std::invalid_argument&) {
        throw InputError("length keys must be edge ids");
      }
      emit(to_string(evaluate(c, coarse, sp, len)));
    });
    s = cr->add_subcommand("distance", "functional on leg distances of a datum on the n-star");
    s->add_option("--datum", datum_file, "{graph, datum}")->required();
    on(s, [&] {
      auto dj = read_json(datum_file);
      StableGraph g;
      CrossRatioDatum c;
      try {
        g = graph_from_json(dj.at("graph"));
        c = datum_from_json(dj.at("datum"));
      } catch (const json::exception& e) {
        throw InputError(e.what());
      }
      const int nn = static_cast<int>(g.marks.size());
      auto m = build_m0n(nn);
      json out = json::object();
      auto f = pullback_to_distance(g, c, nn);
      for (std::size_t k = 0; k < f.size(); ++k)
        if (f[k] != 0) out[std::to_string(m.pairs[k].first) + "," + std::to_string(m.pairs[k].second)] = to_string(f[k]);
      emit(out);
    });
    s = cr->add_subcommand("decompose", "integer combination of primitive data");
    s->add_option("--datum", datum_file, "{graph, datum}")->required();
    on(s, [&] {
      auto dj = read_json(datum_file);
      StableGraph g;
      CrossRatioDatum c;
      try {
        g = graph_from_json(dj.at("graph"));
        c = datum_from_json(dj.at("datum"));
      } catch (const json::exception& e) {
        throw InputError(e.what());
      }
      json out = json::array();
      for (const auto& [k, d] : decompose_primitive(g, c)) out.push_back({{"coefficient", num(k)}, {"datum", to_json(d)}});
      emit(out);
    });
  }

  // cycles
  auto* cy = app.add_subcommand("cycles", "weighted fans");
  cy->require_subcommand(1);
  std::string fan_file, fn_file, map_file;
  {
    auto* s = cy->add_subcommand("balance", "balancing report; exit 1 when unbalanced");
    s->add_option("--fan", fan_file)->required();
    on(s, [&] {
      auto r = check_balancing(fan_from_json(read_json(fan_file)));
      emit(to_json(r));
      if (!r.balanced) exit_code = 1;
    });
    s = cy->add_subcommand("intersect", "corner locus of a function on a fan");
    s->add_option("--fn", fn_file)->required();
    s->add_option("--fan", fan_file)->required();
    on(s, [&] { emit(to_json(divisor_intersect(function_from_json(read_json(fn_file)), fan_from_json(read_json(fan_file))))); });
    s = cy->add_subcommand("push", "push-forward along an integer matrix");
    s->add_option("--map", map_file)->required();
    s->add_option("--fan", fan_file)->required();
    on(s, [&] { emit(to_json(push_forward(matrix_from_json(read_json(map_file)), fan_from_json(read_json(fan_file))))); });
    s = cy->add_subcommand("index", "gcd of maximal minors of an integer matrix");
    s->add_option("--map", map_file)->required();
    on(s, [&] { emit(num(lattice_index(matrix_from_json(read_json(map_file))))); });
    s = cy->add_subcommand("degree", "degree of a zero-dimensional cycle");
    s->add_option("--fan", fan_file)->required();
    on(s, [&] { emit(num(degree(fan_from_json(read_json(fan_file))))); });
  }

  // psi
  auto* psi = app.add_subcommand("psi", "psi classes on M0,n");
  psi->require_subcommand(1);
  std::string exps;
  int leg = 1;
  {
    auto* s = psi->add_subcommand("degree", "degree of a psi monomial");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 9));
    s->add_option("--exp", exps, "a1,...; missing entries are 0")->required();
    on(s, [&] {
      std::vector<int> e;
      for (const auto& x : split_list(exps)) {
        try {
          e.push_back(std::stoi(x));
        } catch (const std::exception&) {
          throw InputError("bad exponent " + x);
        }
      }
      if (static_cast<int>(e.size()) > n) throw InputError("more exponents than legs");
      e.resize(n, 0);
      emit(num(psi_product_degree(n, e)));
    });
    s = psi->add_subcommand("dilaton", "push-forward of psi_{n+1} to M0,n");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 7));
    on(s, [&] {
      auto r = dilaton_pushforward(n);
      std::vector<bool> m(r.cone_matches.begin(), r.cone_matches.end());
      emit({{"factor", num(r.factor)}, {"matches", m}});
      if (!r.matches) exit_code = 1;
    });
    s = psi->add_subcommand("pullback", "psi_i against pull-back plus boundary on test curves");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 6));
    s->add_option("--i", leg)->required();
    on(s, [&] {
      if (leg < 1 || leg > n) throw InputError("leg out of range");
      auto r = pullback_check(n, leg);
      json curves = json::array();
      for (const auto& c : r.curves)
        curves.push_back({{"divisors", c.divisors},
                          {"psi", num(c.psi)},
                          {"pulled_back", num(c.pulled_back)},
                          {"boundary", num(c.boundary)},
                          {"ok", c.ok}});
      emit({{"curves", curves}, {"ok", r.ok}});
      if (!r.ok) exit_code = 1;
    });
    s = psi->add_subcommand("representative", "weight-1 fan of psi_i");
    s->add_option("--n", n)->required()->check(CLI::Range(4, 9));
    s->add_option("--i", leg)->required();
    on(s, [&] {
      if (leg < 1 || leg > n) throw InputError("leg out of range");
      emit(to_json(psi_representative(n, leg).fan));
    });
  }

  // covers and elliptic families
  auto* covers = app.add_subcommand("covers", "admissible covers of degree d");
  covers->require_subcommand(1);
  int d = 0, a = 0, b = 0;
  std::string cls;
  {
    auto* s = covers->add_subcommand("table", "cover classes");
    s->add_option("--d", d)->required()->check(CLI::Range(2, 30));
    on(s, [&] {
      json out = json::array();
      for (const auto& r : cover_class_table(d)) out.push_back(to_json(r));
      emit(out);
    });
    s = covers->add_subcommand("degrees", "source, branch and psi degrees");
    s->add_option("--d", d)->required()->check(CLI::Range(2, 30));
    on(s, [&] {
      Rat src = source_degree(d), br = branch_degree(d), p = psi_covers_degree(d);
      emit({{"source", num(src)}, {"branch", num(br)}, {"psi", num(p)}, {"ratio", to_string(p / src)}});
    });
    s = covers->add_subcommand("rh", "local Riemann-Hurwitz on a representative cover");
    s->add_option("--class", cls)->required();
    s->add_option("--d", d)->required()->check(CLI::Range(2, 30));
    s->add_option("--a", a);
    on(s, [&] {
      auto r = local_rh_check(representative_cover(parse_class(cls), d, a));
      emit({{"harmonic", r.harmonic}, {"riemann_hurwitz", r.riemann_hurwitz}, {"fibers", r.fibers}, {"failures", r.failures}});
      if (!r.ok()) exit_code = 1;
    });
  }
  auto* ell = app.add_subcommand("elliptic", "elliptic families over TP^1");
  ell->require_subcommand(1);
  {
    auto* s = ell->add_subcommand("psi", "degree of psi pulled back to the base");
    s->add_option("--a", a)->required();
    on(s, [&] { emit(num(psi_pullback_degree(EllipticFamilySpec{a}))); });
    s = ell->add_subcommand("isom", "balancing of the constant-weight isomorphism fan");
    s->add_option("--a", a)->required();
    s->add_option("--b", b)->required();
    on(s, [&] { emit(to_json(check_balancing(isom_fan(a, b).fan))); });
  }

  // pencil
  auto* pencil = app.add_subcommand("pencil", "stable maps to the plane");
  pencil->require_subcommand(1);
  std::string fixture, corpus;
  {
    auto* s = pencil->add_subcommand("mult", "gcd of maximal minors of the evaluation matrix");
    s->add_option("--fixture", fixture)->required();
    on(s, [&] {
      ParamStableMapType t;
      try {
        t = param_type_from_json(read_json(fixture));
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
      emit(num(edge_multiplicity(t)));
    });
    s = pencil->add_subcommand("matrix", "evaluation matrix, columns x, y, l_1, ...");
    s->add_option("--fixture", fixture)->required();
    on(s, [&] { emit(matrix_json(evaluation_matrix(param_type_from_json(read_json(fixture))))); });
    s = pencil->add_subcommand("trees", "tree choices of the source and their multiplicities");
    s->add_option("--fixture", fixture)->required();
    on(s, [&] {
      auto src = source_of(param_type_from_json(read_json(fixture)));
      json out = json::array();
      for (const auto& c : tree_choices(src))
        out.push_back({{"root", c.root},
                       {"tree_edges", c.tree_edges},
                       {"unimodular", c.unimodular},
                       {"multiplicity", num(edge_multiplicity(c.type))}});
      emit({{"intrinsic", num(intrinsic_multiplicity(src))}, {"choices", out}});
    });
    s = pencil->add_subcommand("degrees", "psi degrees of the cubic pencil");
    s->add_option("--corpus", corpus, "defaults to PSITROP_FIXTURES/pencil or the built-in corpus");
    on(s, [&] {
      auto r = pencil_degrees(corpus.empty() ? default_corpus() : std::filesystem::path(corpus));
      emit(to_json(r));
      if (!r.consistent) exit_code = 1;
    });
  }
  auto* floors = app.add_subcommand("floors", "floor diagrams");
  floors->require_subcommand(1);
  bool reversed = false;
  {
    auto* s = floors->add_subcommand("count", "weighted count of rational floor diagrams");
    s->add_option("--d", d)->required()->check(CLI::Range(1, 30));
    s->add_flag("--reversed", reversed, "count the reversed diagrams");
    on(s, [&] { emit(num(floor_count(d, 0, reversed))); });
  }

  auto* fixtures = app.add_subcommand("fixtures", "fixture corpus");
  fixtures->require_subcommand(1);
  {
    auto* s = fixtures->add_subcommand("list", "corpus location and files; exit 3 if any is missing");
    s->add_option("--corpus", corpus);
    on(s, [&] {
      std::filesystem::path dir = corpus.empty() ? default_corpus() : std::filesystem::path(corpus);
      auto manifest = read_json((dir / "corpus.json").string());
      json files = json::array();
      bool all = true;
      std::set<std::string> seen;
      for (const auto& m : manifest.at("marks")) {
        auto f = m.at("fixture").get<std::string>();
        if (!seen.insert(f).second) continue;
        bool ok = std::filesystem::exists(dir / f);
        all = all && ok;
        files.push_back({{"file", f}, {"present", ok}, {"digest", ok ? digest(file_text((dir / f).string())) : ""}});
      }
      emit({{"corpus", dir.string()}, {"files", files}});
      if (!all) exit_code = 3;
    });
  }

  std::string level = "desk";
  {
    auto* s = app.add_subcommand("verify-all", "acceptance criteria 1-9");
    s->add_option("--level", level)->check(CLI::IsMember({"smoke", "desk"}));
    on(s, [&] {
      verify::Options opt;
      opt.level = level == "smoke" ? verify::Level::smoke : verify::Level::desk;
      opt.seed = seed;
      json results = json::array(), checks = json::array();
      bool all = true;
      for (const auto& r : verify::run_all(opt)) {
        results.push_back(verify::to_json(r));
        for (const auto& c : r.checks)
          checks.push_back({{"name", "criterion " + std::to_string(r.id) + ": " + c.name},
                            {"expected", c.expected},
                            {"actual", c.actual},
                            {"pass", c.pass}});
        checks.push_back({{"name", "criterion " + std::to_string(r.id) + ": time budget"},
                          {"expected", "within budget"},
                          {"actual", r.seconds <= r.budget ? "within budget" : "over budget"},
                          {"pass", r.seconds <= r.budget}});
        all = all && r.pass();
      }
      emit({{"command", "verify-all"},
            {"inputs_digest", digest("verify-all level=" + level + " seed=" + std::to_string(seed))},
            {"results", results},
            {"checks", checks}});
      if (!all) exit_code = 1;
    });
    s = app.add_subcommand("commands", "command registry");
    on(s, [&] {
      json cmds = json::object(), modules = json::object();
      for (const auto& [c, ops] : registry()) {
        cmds[c] = ops;
        for (const auto& op : ops) modules[op.substr(0, op.find(':'))].push_back(op.substr(op.find(':') + 1));
      }
      emit({{"commands", cmds}, {"modules", modules}});
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }
  (void)as_json;
  try {
    action();
  } catch (const std::exception& e) {
    std::string kind = "input";
    if (dynamic_cast<const ConfigurationError*>(&e)) kind = "configuration";
    else if (dynamic_cast<const UnsupportedScope*>(&e)) kind = "unsupported";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    else if (dynamic_cast<const ConsistencyError*>(&e)) {
      emit({{"error", {{"kind", "consistency"}, {"message", e.what()}}}});
      return 1;
    }
    emit({{"error", {{"kind", kind}, {"message", e.what()}}}});
    return 3;
  }
  return exit_code;
}
