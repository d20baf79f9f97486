// relhyp command line front end.
//
// Exit codes: 0 ok, 1 a verified property failed, 2 parse error,
// 3 precondition violated, 4 no driver for the dimension, 5 L is empty.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "relhyp/corpus.hpp"
#include "relhyp/groupgeom.hpp"
#include "relhyp/io.hpp"

#ifndef RELHYP_VERSION
#define RELHYP_VERSION "0.0.0"
#endif

using namespace relhyp;
using io::json;

namespace {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string partition;
  std::string cones;
  std::string driver;
  std::string block;
  std::string complex;
  int cone_point = -1;
  int rounds = 2;
  std::size_t budget_tietze = 1000000;
  std::size_t budget_cosets = 100000;
  int lmax = 8;
  std::string output;
  std::string format = "json";

  json to_json() const {
    return {{"command", command},   {"inputs", inputs},         {"partition", partition},
            {"cones", cones},       {"driver", driver},         {"block", block},
            {"complex", complex},   {"cone_point", cone_point}, {"rounds", rounds},
            {"budget_tietze", budget_tietze}, {"budget_cosets", budget_cosets}, {"lmax", lmax},
            {"format", format}};
  }
};

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string rat(const Rational& r) { return r.str(); }

// "0,1;2" -> {{0,1},{2}}
std::vector<std::vector<std::size_t>> parse_blocks(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  if (text.empty()) return out;
  std::stringstream blocks(text);
  std::string block;
  while (std::getline(blocks, block, ';')) {
    std::vector<std::size_t> b;
    std::stringstream items(block);
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        std::size_t used = 0;
        long v = std::stol(item, &used);
        if (used != item.size() || v < 0) throw std::invalid_argument(item);
        b.push_back(static_cast<std::size_t>(v));
      } catch (const std::logic_error&) {
        throw ParseError("bad list entry \"" + item + "\" in \"" + text + "\"");
      }
    }
    if (b.empty()) throw ParseError("empty block in \"" + text + "\"");
    out.push_back(std::move(b));
  }
  return out;
}

BlockDatum load_block(const RunConfig& cfg, int dim) {
  if (!cfg.block.empty()) return io::block_from_json(io::read_json_file(cfg.block));
  return bundled_block(std::max(1, std::min(dim, 2)));
}

json homology_all(const SimplicialComplex& x) {
  json out = json::array();
  for (int k = 0; k <= std::max(0, x.dimension()); ++k) out.push_back(io::homology_to_json(homology(x, k, Coefficients::integers)));
  return out;
}

json cmd_hyperbolize(const RunConfig& cfg) {
  auto k = io::complex_from_json(io::read_json_file(cfg.inputs.at(0)));
  auto b = load_block(cfg, k.dimension());
  auto hz = hyperbolize(k, b, cfg.driver);
  const auto& h = hz.h.complex;
  const int n = std::max(0, h.dimension());
  auto npc = npc_certificate(hz.gromov.complex);
  auto man = check_manifold(h, n);
  auto ori = orient(h, n);
  json drivers = json::array();
  for (int d = 0; d <= 3; ++d) {
    try {
      drivers.push_back({{"dim", d}, {"driver", driver_for_dim(d).name()}});
    } catch (const DriverMissingError&) {
    }
  }
  const auto& used = cfg.driver.empty() ? driver_for_dim(k.dimension()) : driver_by_name(cfg.driver);
  return {{"complex", io::complex_to_json(h)},
          {"registry", {{"driver", used.name()}, {"blocks", hz.h.blocks.size()}, {"block_dim", b.n}, {"drivers", drivers}}},
          {"euler_characteristic", euler_characteristic(h)},
          {"homology", homology_all(h)},
          {"manifold", {{"verdict", to_string(man.verdict)}, {"detail", man.detail}}},
          {"orientable", ori.orientable},
          {"npc", {{"pass", npc.pass}, {"cubes", hz.gromov.complex.cube_count()}, {"first_failure", npc.first_failure}}}};
}

json peripheral_json(const PeripheralStructure& ps) {
  json subs = json::array();
  for (const auto& s : ps.subgroups) {
    json words = json::array();
    for (const auto& w : s.generators) words.push_back(word_to_string(w, ps.ambient_generators));
    subs.push_back({{"component", s.component},
                    {"source", s.source},
                    {"classification", to_string(s.classification)},
                    {"reason", s.reason},
                    {"h1", {{"rank", s.h1.rank}, {"torsion", s.h1.torsion}}},
                    {"order", s.order},
                    {"generators", words}});
  }
  return {{"ambient_generators", ps.ambient_generators}, {"ambient_relators", ps.ambient_relators}, {"subgroups", subs}};
}

json cmd_rel_hyperbolize(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw ParseError("rel-hyperbolize needs the files of K and L");
  auto k = io::complex_from_json(io::read_json_file(cfg.inputs[0]));
  auto l = io::complex_from_json(io::read_json_file(cfg.inputs[1]));
  if (cfg.rounds != 2) throw DomainError("only two subdivision rounds are supported");
  auto partition = parse_blocks(cfg.partition);
  auto b = load_block(cfg, k.dimension());
  auto pair = relative_hyperbolize(k, l, partition, b, cfg.driver);

  json prov = json::array();
  bool prov_ok = true;
  for (const auto& c : pair.provenance_checks) {
    prov.push_back({{"ok", c.ok}, {"detail", c.detail}});
    prov_ok = prov_ok && c.ok;
  }
  auto vol = volume_report(pair);
  auto cq = cone_quotient(pair);
  json part = json::array();
  for (const auto& blk : pair.partition) part.push_back(blk);
  json pi1 = nullptr;
  if (path_components(pair.r_k).size() == 1) {
    auto t = tietze_simplify(presentation_from_complex(pair.r_k), cfg.budget_tietze);
    auto ab = abelianization(t.presentation);
    pi1 = {{"generators", t.presentation.generators.size()},
           {"relators", t.presentation.relators.size()},
           {"steps", t.steps},
           {"budget_exhausted", t.budget_exhausted},
           {"h1", {{"rank", ab.rank}, {"torsion", ab.torsion}}}};
  }
  return {{"r_k", io::complex_to_json(pair.r_k)},
          {"r_l", io::complex_to_json(pair.r_l)},
          {"partition", part},
          {"driver", pair.driver},
          {"cone_vertices", pair.cone_vertices.size()},
          {"component_source", pair.component_source},
          {"fundamental_group", pi1},
          {"provenance", {{"pass", prov_ok}, {"checks", prov}}},
          {"peripheral", peripheral_json(peripheral_structure(pair, cfg.budget_cosets))},
          {"volume",
           {{"n", vol.n},
            {"s", vol.s},
            {"blocks", vol.blocks},
            {"c_n", vol.c_n},
            {"s_le_n", vol.s_le_n},
            {"n_le_cs", vol.n_le_cs},
            {"orientable", vol.orientable},
            {"facet_count", vol.facet_count},
            {"fundamental_norm", rat(vol.fundamental_norm)},
            {"absolute_norm", rat(vol.absolute_norm)},
            {"conversion_cycle", vol.conversion_cycle},
            {"conversion_bound", vol.conversion_bound},
            {"lower_bound", vol.lower_bound}}},
          {"cone_quotient",
           {{"isomorphic", cq.isomorphic},
            {"same_partition", cq.same_partition},
            {"euler_quotient", cq.euler_quotient},
            {"euler_direct", cq.euler_direct},
            {"homology_match", cq.homology_match}}}};
}

json cmd_graph(const RunConfig& cfg) {
  auto g = io::graph_from_json(io::read_json_file(cfg.inputs.at(0)));
  if (!cfg.cones.empty()) {
    std::vector<std::vector<int>> sets;
    for (const auto& blk : parse_blocks(cfg.cones)) sets.emplace_back(blk.begin(), blk.end());
    g = coned_off(g, sets);
  }
  bool cone_ok = true;
  for (auto [u, v] : g.edges()) cone_ok = cone_ok && !(g.cones().count(u) && g.cones().count(v));
  auto delta = delta_hyperbolicity(g);
  json census = json::array();
  std::size_t worst = 0;
  for (const auto& e : fineness_census(g, cfg.lmax)) {
    census.push_back({{"edge", {e.edge.first, e.edge.second}}, {"by_length", e.by_length}, {"total", e.total}});
    worst = std::max(worst, e.total);
  }
  return {{"vertices", g.size()},
          {"edges", g.edges().size()},
          {"cones", g.cones()},
          {"cone_structure_ok", cone_ok},
          {"delta", rat(delta)},
          {"lmax", cfg.lmax},
          {"max_circuits_per_edge", worst},
          {"census", census}};
}

struct Suite {
  json checks = json::array();
  bool pass = true;
  void add(const std::string& input, const std::string& property, bool ok, const std::string& detail = "") {
    checks.push_back({{"input", input}, {"property", property}, {"pass", ok}, {"detail", detail}});
    pass = pass && ok;
  }
};

void verify_complex(Suite& s, const std::string& name, const SimplicialComplex& k, const RunConfig& cfg) {
  const int n = k.dimension();
  // norm inequality on the fundamental chain and seeded random chains
  if (n >= 1) {
    std::mt19937 rng(static_cast<unsigned>(k.facets().size()));
    bool ok = true;
    for (int t = 0; t < 20 && ok; ++t) {
      Chain c(n);
      for (const auto& f : k.facets())
        if (static_cast<int>(f.size()) == n + 1) c.add(f, Rational(static_cast<std::int64_t>(rng() % 7) - 3, 1 + rng() % 4));
      ok = boundary_norm_check(c);
    }
    s.add(name, "boundary norm <= (n+1) norm", ok);
  }
  const HyperbolizationDriver* d = nullptr;
  try {
    d = cfg.driver.empty() ? &driver_for_dim(n) : &driver_by_name(cfg.driver);
  } catch (const DriverMissingError& e) {
    s.add(name, "driver available", false, e.what());
    return;
  }
  ContractReport r;
  try {
    r = check_driver_contract(*d, k);
  } catch (const DomainError& e) {
    s.add(name, "driver contract", false, e.what());
    return;
  }
  s.add(name, "folding valid", r.folding_valid);
  s.add(name, "flag links", r.npc);
  s.add(name, "link provenance", r.link_provenance);
  s.add(name, "manifold preserved", r.manifold_preserved);
  s.add(name, "shadow surjective", r.shadow_surjective, r.failures.empty() ? "" : r.failures.front());

  // link transfer: the link in H(K) at a cube vertex has one piece per piece of the cube link
  if (n == 2) {
    auto b = load_block(cfg, 2);
    auto hz = hyperbolize(k, b, d->name());
    bool ok = true;
    std::string detail;
    for (Vertex v : hz.gromov.complex.vertices()) {
      auto lc = vertex_link(hz.gromov.complex, v);
      auto lh = link(hz.h.complex, {v});
      if (path_components(lh).size() != path_components(lc).size()) {
        ok = false;
        detail = "vertex " + std::to_string(v);
        break;
      }
    }
    s.add(name, "link transfer", ok, detail);
  }
}

json cmd_verify(const RunConfig& cfg) {
  Suite s;
  if (cfg.inputs.empty()) {
    for (const auto& c : corpus::surfaces()) verify_complex(s, c.name, c.complex, cfg);
    for (int n = 1; n <= 2; ++n) {
      auto cert = validate_block(bundled_block(n));
      s.add("bundled_block(" + std::to_string(n) + ")", "block valid", cert.ok, cert.violation);
    }
    for (int n = 2; n <= 3; ++n) {
      auto t = torus_cubulation(n);
      auto f = validate_folding(t.complex, t.folding);
      s.add("torus_cubulation(" + std::to_string(n) + ")", "folding valid", f.ok, f.violation);
      s.add("torus_cubulation(" + std::to_string(n) + ")", "npc", npc_certificate(t.complex).pass);
    }
  }
  for (const auto& path : cfg.inputs) {
    auto j = io::read_json_file(path);
    if (j.is_object() && j.contains("corners")) {
      auto cert = validate_block(io::block_from_json(j));
      s.add(path, "block valid", cert.ok, cert.violation);
    } else if (j.is_object() && j.contains("cubes")) {
      auto c = io::cubical_from_json(j);
      if (j.contains("folding")) {
        auto f = validate_folding(c, io::folding_from_json(j.at("folding"), c.dim()));
        s.add(path, "folding valid", f.ok, f.ok ? "" : "cube " + std::to_string(f.cube) + ": " + f.violation);
      }
      auto npc = npc_certificate(c);
      s.add(path, "npc", npc.pass, npc.first_failure);
    } else {
      verify_complex(s, path, io::complex_from_json(j), cfg);
    }
  }
  return {{"pass", s.pass}, {"checks", s.checks}};
}

json cmd_chain_convert(const RunConfig& cfg) {
  if (cfg.complex.empty() || cfg.cone_point < 0) throw ParseError("chain-convert needs --complex and --cone-point");
  auto c = io::chain_from_json(io::read_json_file(cfg.inputs.at(0)));
  ConePairDatum pair{io::complex_from_json(io::read_json_file(cfg.complex)), cfg.cone_point};
  auto r = relative_to_absolute(c, pair);
  return {{"absolute", io::chain_to_json(r.absolute)},
          {"scalar", rat(r.scalar)},
          {"norm_input", rat(r.norm_input)},
          {"norm_boundary", rat(r.norm_boundary)},
          {"norm_output", rat(r.norm_output)},
          {"is_cycle", r.is_cycle},
          {"bound_holds", r.bound_holds},
          {"same_relative_class", r.same_relative_class}};
}

void render_text(std::ostream& out, const json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) render_text(out, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
  } else if (j.is_array() && !j.empty() && (j[0].is_object())) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(out, j[i], prefix + "[" + std::to_string(i) + "]");
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

int run(const RunConfig& cfg) {
  json result;
  if (cfg.command == "hyperbolize")
    result = cmd_hyperbolize(cfg);
  else if (cfg.command == "rel-hyperbolize")
    result = cmd_rel_hyperbolize(cfg);
  else if (cfg.command == "graph")
    result = cmd_graph(cfg);
  else if (cfg.command == "verify")
    result = cmd_verify(cfg);
  else
    result = cmd_chain_convert(cfg);

  json report = {{"tool", "relhyp"},
                 {"version", RELHYP_VERSION},
                 {"config_hash", fnv1a(cfg.to_json().dump())},
                 {"command", cfg.command},
                 {"result", result}};
  std::string text;
  if (cfg.format == "text") {
    std::ostringstream out;
    render_text(out, report, "");
    text = out.str();
  } else {
    text = report.dump(2) + "\n";
  }
  if (cfg.output.empty())
    std::cout << text;
  else
    io::write_file_atomic(cfg.output, text);
  bool failed = cfg.command == "verify" && !result.at("pass").get<bool>();
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strict and relative hyperbolization of simplicial complexes"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("-o,--output", cfg.output, "write the report here instead of stdout");
  };
  auto with_driver = [&](CLI::App* sub) {
    sub->add_option("--driver", cfg.driver, "hyperbolization driver (default: by dimension)");
    sub->add_option("--block", cfg.block, "block datum JSON (default: bundled block)");
  };

  auto* hyp = app.add_subcommand("hyperbolize", "hyperbolize a simplicial complex");
  hyp->add_option("complex", cfg.inputs, "complex JSON")->required()->expected(1);
  with_driver(hyp);
  common(hyp);

  auto* rel = app.add_subcommand("rel-hyperbolize", "relative hyperbolization of a pair (K, L)");
  rel->add_option("files", cfg.inputs, "K and L complex JSON")->required()->expected(2);
  rel->add_option("--partition", cfg.partition, "blocks of components of L, e.g. \"0,1;2\"");
  rel->add_option("--rounds", cfg.rounds, "subdivision rounds");
  rel->add_option("--budget-cosets", cfg.budget_cosets, "coset table rows")->check(CLI::PositiveNumber);
  rel->add_option("--budget-tietze", cfg.budget_tietze, "Tietze steps")->check(CLI::PositiveNumber);
  with_driver(rel);
  common(rel);

  auto* gr = app.add_subcommand("graph", "hyperbolicity and fineness of a finite graph");
  gr->add_option("graph", cfg.inputs, "graph JSON")->required()->expected(1);
  gr->add_option("--lmax", cfg.lmax, "longest circuit length counted")->check(CLI::Range(3, 12));
  gr->add_option("--cone", cfg.cones, "vertex sets to cone off, e.g. \"0,3;4,5\"");
  common(gr);

  auto* ver = app.add_subcommand("verify", "run the property suite (bundled corpus when no files)");
  ver->add_option("files", cfg.inputs, "complex, cube complex or block JSON");
  with_driver(ver);
  common(ver);

  auto* cc = app.add_subcommand("chain-convert", "relative cycle of (Z, S) to an absolute cycle");
  cc->add_option("chain", cfg.inputs, "chain JSON")->required()->expected(1);
  cc->add_option("--complex", cfg.complex, "complex Z JSON")->required();
  cc->add_option("--cone-point", cfg.cone_point, "vertex S of Z")->required();
  common(cc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return run(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const EmptySubcomplexError& e) {
    std::cerr << "empty subcomplex: " << e.what() << "\n";
    return 5;
  } catch (const DomainError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const DriverMissingError& e) {
    std::cerr << "no driver: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
