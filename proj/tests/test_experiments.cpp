#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dforge/error.hpp"
#include "dforge/experiments.hpp"

using namespace dforge;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "dforge_test_experiments";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("configs round-trip and hash only their content") {
  ExperimentConfig c;
  c.kind = "glp-search";
  c.params = {{"m", 101}, {"d", 2}};
  c.out_json = "a.json";
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  ExperimentConfig moved = c;
  moved.out_json = "elsewhere.json";
  moved.kernel_cache = "k.json";
  CHECK(moved.hash() == c.hash());
  ExperimentConfig other = c;
  other.params["m"] = 211;
  CHECK(other.hash() != c.hash());
  CHECK(c.hash().size() == 16);
}

TEST_CASE("invalid configs are config errors") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"experiment", "plot"}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"params", json::object()}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"experiment", "bound"}, {"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), ConfigError);
  ExperimentConfig c;
  c.kind = "bound";
  c.params = {{"set", {{"type", "ball"}, {"center", {0.5, 0.5}}, {"radius", 0.25}}}};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);  // no points
  c.kind = "glp-search";
  c.params = {{"m", 100}};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("reports embed the config hash and kernel provenance, and are reproducible") {
  const auto dir = scratch_dir();
  ExperimentConfig c;
  c.kind = "bound";
  c.params = {{"set", {{"type", "polytope"}, {"vertices", {{0.1, 0.1}, {0.5, 0.2}, {0.3, 0.6}}}, {"epsilon", 0.3}}},
              {"points", "korobov:m=101,g=1;39"},
              {"R", 8}};
  c.kernel_cache = (dir / "kernel.json").string();
  c.out_json = (dir / "r1.json").string();
  c.out_csv = (dir / "r1.csv").string();
  std::filesystem::remove(c.kernel_cache);
  const ExperimentResult r1 = run_experiment(c);  // builds and caches the kernel
  CHECK(r1.passed());
  CHECK(r1.report.at("config_hash") == c.hash());
  CHECK(r1.report.at("kernel").at("format") == "dforge.kernel");
  CHECK(r1.report.at("kernel").contains("table_hash"));
  CHECK(std::filesystem::exists(c.kernel_cache));

  ExperimentConfig c2 = c;
  c2.out_json = (dir / "r2.json").string();
  c2.out_csv = (dir / "r2.csv").string();
  const ExperimentResult r2 = run_experiment(c2);  // reads the cached kernel
  CHECK(r1.report.at("results").dump() == r2.report.at("results").dump());
  CHECK(r1.report.at("kernel").dump() == r2.report.at("kernel").dump());
  CHECK(slurp(c.out_csv) == slurp(c2.out_csv));

  std::ifstream csv(c.out_csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k1,k2,chi_re,chi_im,chi_abs,h_abs,weyl_abs,term");
}

TEST_CASE("glp-search runs are byte-identical") {
  const auto dir = scratch_dir();
  ExperimentConfig c;
  c.kind = "glp-search";
  c.params = {{"m", 101}, {"d", 2}, {"strategy", "random"}, {"samples", 50}};
  c.seed = 5;
  c.out_json = (dir / "g1.json").string();
  run_experiment(c);
  ExperimentConfig c2 = c;
  c2.out_json = (dir / "g2.json").string();
  run_experiment(c2);
  json a = json::parse(slurp(c.out_json)), b = json::parse(slurp(c2.out_json));
  a.erase("config");
  b.erase("config");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("sphere experiment reports the Ramanujan threshold only for k = 1") {
  ExperimentConfig c;
  c.kind = "sphere";
  c.params = {{"k", 2}, {"caps", {"0,0,1,0.5236"}}, {"L", 10}};
  const ExperimentResult r = run_experiment(c);
  CHECK(r.report.at("experiment") == "sphere-orbit");
  CHECK(r.report.at("results").at("m") == 37);
  bool has_threshold = false;
  for (const Check& ch : r.checks) has_threshold |= ch.name == "ramanujan_threshold";
  CHECK_FALSE(has_threshold);
  CHECK(r.passed());
}

TEST_CASE("every listed kind is accepted") {
  for (const std::string& kind : experiment_kinds()) {
    json j = {{"experiment", kind}};
    CHECK_NOTHROW(ExperimentConfig::from_json(j));
  }
  CHECK_NOTHROW(ExperimentConfig::from_json(json{{"experiment", "sphere"}}));
}
