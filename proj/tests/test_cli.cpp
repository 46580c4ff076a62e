#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "sphstab/cli.hpp"

using namespace sphstab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sphstab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"gen-polytope"}).code == kExitUsage);
  CHECK(run({"gen-polytope", "--kind", "simplex", "--dim", "3", "--format", "xml"}).code == kExitUsage);
  const Run bad = run({"gen-polytope", "--kind", "dodecahedron"});
  CHECK(bad.code == kExitUsage);
  CHECK(json::parse(bad.err)["error"] == "InputError");
  CHECK(run({"gen-polytope", "--kind", "icosahedron", "--dim", "4"}).code == kExitUsage);
}

TEST_CASE("gen-polytope") {
  const Run r = run({"gen-polytope", "--kind", "icosahedron"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["dimension"] == 3);
  CHECK(j["points"].size() == 12);
  CHECK(j["eps"] == 0.0);
  CHECK(j["meta"]["kind"] == "icosahedron");
  const Run csv = run({"gen-polytope", "--kind", "crosspolytope", "--dim", "4", "--format", "csv"});
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 8);
}

TEST_CASE("perturb then recover") {
  TempDir tmp;
  const std::string packing = tmp.file("ico.json");
  REQUIRE(run({"perturb", "--kind", "icosahedron", "--eps", "1e-7", "--seed", "3", "--out", packing}).code == kExitOk);
  const Run r = run({"recover", "--in", packing, "--kind", "icosahedron"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["eps"] == 1e-7);
  CHECK(j["max_deviation"].get<double>() <= 100 * 1e-7);
  CHECK(j["matching"].size() == 12);
  CHECK(j["procrustes"]["max_deviation"].get<double>() <= 2.0 * j["max_deviation"].get<double>());
  CHECK(j.contains("step1_bound"));

  const std::string simplex = tmp.file("s.json");
  REQUIRE(run({"perturb", "--kind", "simplex", "--dim", "5", "--eps", "1e-6", "--mode", "tangent-gaussian",
               "--out", simplex})
              .code == kExitOk);
  const Run s = run({"recover", "--in", simplex, "--kind", "simplex", "--eps", "1e-6", "--format", "csv"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("pass,true") != std::string::npos);
  CHECK(run({"recover", "--in", simplex, "--kind", "simplex", "--dim", "4"}).code == kExitUsage);
}

TEST_CASE("malformed input never leaves a result file") {
  TempDir tmp;
  const std::string bad = tmp.file("bad.json");
  std::ofstream(bad) << "{\"dimension\": 3, \"points\": [[1, 0]]";
  const std::string out = tmp.file("result.json");
  const Run r = run({"recover", "--in", bad, "--kind", "simplex", "--out", out});
  CHECK(r.code == kExitUsage);
  CHECK(json::parse(r.err)["error"] == "InputError");
  CHECK(!fs::exists(out));
  CHECK(!fs::exists(out + ".tmp"));
  std::ofstream(bad) << "{\"dimension\": 3, \"points\": [[1, 0]], \"phi\": 0.5, \"eps\": 0}";
  CHECK(run({"recover", "--in", bad, "--kind", "simplex", "--out", out}).code == kExitUsage);
  CHECK(!fs::exists(out));
  CHECK(run({"recover", "--in", tmp.file("missing.json"), "--kind", "simplex"}).code == kExitUsage);
}

TEST_CASE("inadmissible pair structure is rejected") {
  TempDir tmp;
  // A near-crosspolytope in which one pair has inner product -0.5.
  const double c = std::sqrt(0.75);
  const json bad = {{"dimension", 3},
                    {"points", {{1, 0, 0}, {-0.5, c, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}},
                    {"phi", 0.7853981633974483},
                    {"eps", 0.01}};
  const std::string path = tmp.file("x.json");
  std::ofstream(path) << bad.dump();
  const Run r = run({"recover", "--in", path, "--kind", "crosspolytope", "--eps", "1e-6"});
  CHECK(r.code != kExitOk);
  CHECK(json::parse(r.err).contains("error"));
}

TEST_CASE("delone") {
  const Run r = run({"delone", "--kind", "600-cell"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["cells"].size() == 600);
  CHECK(j["cell_count"] == 600);
  CHECK(j["total_volume"].get<double>() == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-6));
  CHECK(j["cells"][0]["circumcenter"].size() == 4);
  CHECK(run({"delone"}).code == kExitUsage);
}

TEST_CASE("density") {
  const Run r = run({"density", "--kind", "icosahedron"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["bound"].get<double>() == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(j["volume"].get<double>() == doctest::Approx(M_PI / 30.0).epsilon(1e-12));
  const Run t = run({"density", "--t", "0.3,0.6", "--format", "csv"});
  CHECK(t.code == kExitOk);
  CHECK(t.out.rfind("key,value\n", 0) == 0);
  CHECK(t.out.find("delta,") != std::string::npos);
  CHECK(run({"density", "--t", "0.6,0.3"}).code == kExitUsage);
  CHECK(run({"density"}).code == kExitUsage);
}

TEST_CASE("lp-bound") {
  const Run r = run({"lp-bound", "--dim", "4", "--poly", "(t+1)*t", "--s", "0"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["bound"].get<double>() == doctest::Approx(8.0));
  const Run bad = run({"lp-bound", "--dim", "3", "--poly", "t+0.5", "--s", "0"});
  CHECK(bad.code == kExitCertification);
  const json e = json::parse(bad.err);
  CHECK(e["error"] == "CertificateError");
  CHECK(e.contains("violating_t"));
  CHECK(run({"lp-bound", "--dim", "3", "--poly", "t+*", "--s", "0"}).code == kExitUsage);
}

TEST_CASE("verify-lemmas") {
  const Run r = run({"verify-lemmas", "--samples", "100"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("lemma,params,lhs,rhs,slack,pass,gate\n", 0) == 0);
  CHECK(r.out.find("tetrahedron-volume") != std::string::npos);
  const Run j = run({"verify-lemmas", "--dim", "3", "--phi", "0.5", "--format", "json"});
  CHECK(j.code == kExitOk);
  CHECK(json::parse(j.out).is_array());
  CHECK(run({"verify-lemmas", "--dim", "5", "--phi", "0.3"}).code == kExitUsage);
}

TEST_CASE("experiment") {
  TempDir tmp;
  const std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
  const std::vector<std::string> base{"experiment", "--kind", "crosspolytope", "--dim", "3", "--eps", "1e-7,1e-5",
                                      "--seeds", "4", "--seed", "9"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  CHECK(run(with({"--jobs", "1", "--out", a})).code == kExitOk);
  CHECK(run(with({"--jobs", "3", "--out", b})).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("# sphstab experiment csv v1\n", 0) == 0);
  const Run s = run(with({}));
  CHECK(s.out == slurp(a));
  const Run e = run({"experiment", "--kind", "simplex", "--dim", "3", "--eps", "-1e-6"});
  CHECK(e.code == kExitUsage);
  const Run x = run({"experiment", "--kind", "icosahedron", "--eps", "1e-7", "--seeds", "2"});
  CHECK(x.code == kExitOk);
  CHECK(x.err.find("exploratory") != std::string::npos);
  CHECK(run({"experiment", "--kind", "simplex", "--dim", "3", "--format", "json"}).code == kExitUsage);
}
