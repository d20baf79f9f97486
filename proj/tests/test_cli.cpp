#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relhyp/corpus.hpp"
#include "relhyp/io.hpp"

using namespace relhyp;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("relhyp_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const json& j) {
  auto p = scratch() / name;
  std::ofstream(p) << j.dump();
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// runs the CLI; returns the exit code
int run(const std::string& args) {
  std::string cmd = std::string(RELHYP_CLI) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json run_json(const std::string& args, int expect = 0) {
  auto out = (scratch() / "out.json").string();
  REQUIRE(run(args + " -o " + out) == expect);
  return json::parse(slurp(out));
}

}  // namespace

TEST_CASE("hyperbolize command") {
  auto c3 = put("c3.json", io::complex_to_json(corpus::cycle(3)));
  auto r = run_json("hyperbolize " + c3);
  auto h = io::complex_from_json(r["result"]["complex"]);
  CHECK(h.facets().size() == 6);
  CHECK(path_components(h).size() == 1);
  CHECK(r["version"].is_string());
  CHECK(r["config_hash"].get<std::string>().size() == 16);

  auto d2 = put("d2.json", io::complex_to_json(corpus::simplex(2)));
  auto s = run_json("hyperbolize " + d2)["result"];
  CHECK(s["euler_characteristic"].get<int>() < 0);
  CHECK(s["manifold"]["verdict"] == "yes");
  CHECK(s["npc"]["pass"] == true);

  auto bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << "{\"facets\": [[0, 1],";
  CHECK(run("hyperbolize " + bad) == 2);
  CHECK(run("hyperbolize " + (scratch() / "missing.json").string()) == 2);
  CHECK(run("hyperbolize " + put("t3.json", io::complex_to_json(corpus::simplex(3)))) == 4);
  CHECK(run("hyperbolize " + put("np.json", json::parse(R"({"facets":[[0,1,2],[2,3]]})"))) == 3);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("determinism and text output") {
  auto d2 = put("d2.json", io::complex_to_json(corpus::simplex(2)));
  auto a = (scratch() / "a.json").string(), b = (scratch() / "b.json").string();
  REQUIRE(run("hyperbolize " + d2 + " -o " + a) == 0);
  REQUIRE(run("hyperbolize " + d2 + " -o " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  auto t = (scratch() / "t.txt").string();
  REQUIRE(run("hyperbolize " + d2 + " --format text -o " + t) == 0);
  CHECK(slurp(t).find("result.orientable: true") != std::string::npos);
  CHECK(run("hyperbolize " + d2 + " --format yaml") == 2);
}

TEST_CASE("rel-hyperbolize command") {
  auto ann = corpus::annulus(3);
  auto k = put("ann.json", io::complex_to_json(ann));
  auto l = put("ann_l.json", io::complex_to_json(boundary_subcomplex(ann)));
  auto one = run_json("rel-hyperbolize " + k + " " + l + " --partition 0,1")["result"];
  CHECK(one["cone_vertices"] == 1);
  CHECK(one["provenance"]["pass"] == true);
  CHECK(one["cone_quotient"]["isomorphic"] == true);
  CHECK(one["peripheral"]["subgroups"].size() == 2);
  for (const auto& s : one["peripheral"]["subgroups"]) CHECK(s["classification"] == "infinite");
  CHECK(one["volume"]["s_le_n"] == true);

  auto empty = put("empty.json", json::parse(R"({"facets":[]})"));
  CHECK(run("rel-hyperbolize " + k + " " + empty) == 5);
  CHECK(run("rel-hyperbolize " + k + " " + l + " --partition 0,x") == 2);
  CHECK(run("rel-hyperbolize " + k + " " + l + " --partition '0;0'") == 3);
}

TEST_CASE("graph command") {
  auto tree = put("tree.json", json::parse(R"({"vertices":[0,1,2,3,4],"edges":[[0,1],[1,2],[1,3],[3,4]]})"));
  auto r = run_json("graph " + tree)["result"];
  CHECK(r["delta"] == "0");
  CHECK(r["max_circuits_per_edge"] == 0);

  auto c5 = put("c5.json", json::parse(R"({"vertices":[0,1,2,3,4],"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]})"));
  for (const auto& e : run_json("graph " + c5 + " --lmax 5")["result"]["census"]) CHECK(e["total"] == 1);
  auto coned = run_json("graph " + tree + " --cone 0,4")["result"];
  CHECK(coned["cone_structure_ok"] == true);
  CHECK(coned["cones"] == json::array({5}));

  CHECK(run("graph " + put("disc.json", json::parse(R"({"vertices":[0,1,2],"edges":[[0,1]]})"))) == 3);
  CHECK(run("graph " + c5 + " --lmax 2") == 2);
}

TEST_CASE("verify command") {
  auto all = run_json("verify")["result"];
  CHECK(all["pass"] == true);
  CHECK(all["checks"].size() > 50);

  auto t = torus_cubulation(2);
  auto cubes = io::cubical_to_json(t.complex);
  cubes["folding"] = io::folding_to_json(t.folding);
  CHECK(run_json("verify " + put("torus.json", cubes))["result"]["pass"] == true);
  std::size_t top = 0;
  while (cubes["folding"][top]["flip"].empty()) ++top;
  cubes["folding"][top]["flip"][0] = 1 - cubes["folding"][top]["flip"][0].get<int>();
  auto broken = run_json("verify " + put("torus_bad.json", cubes), 1)["result"];
  CHECK(broken["pass"] == false);
  bool named = false;
  for (const auto& c : broken["checks"])
    if (c["property"] == "folding valid" && c["pass"] == false) named = !c["detail"].get<std::string>().empty();
  CHECK(named);

  auto blk = io::block_to_json(bundled_block(2));
  std::swap(blk["corners"]["--"], blk["corners"]["++"]);
  auto bad_block = run_json("verify " + put("block_bad.json", blk), 1)["result"];
  CHECK(bad_block["checks"][0]["property"] == "block valid");
  CHECK_FALSE(bad_block["checks"][0]["detail"].get<std::string>().empty());
}

TEST_CASE("chain-convert command") {
  // fan disk with its rim collapsed to S = 100
  auto disk = corpus::fan_disk(6);
  std::map<Vertex, Vertex> q{{0, 0}};
  for (int i = 1; i <= 6; ++i) q[i] = 100;
  auto c = push_forward(fundamental_cycle(disk, orient(disk, 2)), q, true);
  auto cf = put("chain.json", io::chain_to_json(c));
  auto z = put("z.json", io::complex_to_json(SimplicialComplex({{0, 100}})));
  auto r = run_json("chain-convert " + cf + " --complex " + z + " --cone-point 100")["result"];
  CHECK(r["is_cycle"] == true);
  CHECK(r["bound_holds"] == true);
  auto abs = io::chain_from_json(r["absolute"], 2);
  CHECK(boundary(abs).is_zero());
  CHECK(run("chain-convert " + cf) == 2);
}
