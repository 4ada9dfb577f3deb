#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dforge/error.hpp"
#include "dforge/experiments.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitConfig = 3;

struct FlagSpec {
  const char* flag;   // CLI spelling without dashes
  const char* key;    // parameter key
  const char* help;
  bool multi = false;
};

const std::map<std::string, std::vector<FlagSpec>>& flag_table() {
  static const std::map<std::string, std::vector<FlagSpec>> table = {
      {"kernel-build",
       {{"d", "d", "space dimension (1, 2 or 3)"},
        {"t-check", "t_check", "upper end of the I(t+1) >= exp(-2 pi) I(t) check grid"}}},
      {"sandwich",
       {{"set", "set", "set JSON file"},
        {"R", "R", "exponential type; a comma list runs several"},
        {"grid-n", "grid_n", "evaluation grid points per axis"}}},
      {"bound",
       {{"set", "set", "set JSON file"},
        {"points", "points", "point-set descriptor, e.g. lattice:m=1024"},
        {"R", "R", "value, auto:<lattice|kronecker> or search:<rule>"},
        {"alpha", "alpha", "Fourier decay exponent"},
        {"beta", "beta", "Minkowski exponent"},
        {"eps", "eps", "logarithmic slack for the kronecker rule"}}},
      {"lattice-scaling",
       {{"d", "d", "space dimension"},
        {"set", "set", "set JSON file (default: ball r = 1/4)"},
        {"m", "m", "comma list of lattice sizes"},
        {"alpha", "alpha", "Fourier decay exponent"},
        {"beta", "beta", "Minkowski exponent"}}},
      {"kronecker-scaling",
       {{"x", "x", "direction, e.g. sqrt2-1;sqrt3-1"},
        {"set", "set", "set JSON file (default: ball r = 1/4)"},
        {"m", "m", "comma list of point counts"},
        {"schmidt-R", "schmidt_R", "comma list of R for the Schmidt sum"},
        {"alpha", "alpha", "Fourier decay exponent"},
        {"beta", "beta", "Minkowski exponent"},
        {"eps", "eps", "logarithmic slack"}}},
      {"glp-search",
       {{"d", "d", "space dimension"},
        {"m", "m", "prime modulus"},
        {"X", "X", "hyperplane family: coordinate or coordinate+diagonal"},
        {"strategy", "strategy", "exhaustive, random or korobov-rank1"},
        {"samples", "samples", "candidates for the random strategy"}}},
      {"polytope-family",
       {{"d", "d", "space dimension"},
        {"m", "m", "comma list of primes"},
        {"X", "X", "hyperplane family"},
        {"corpus", "corpus", "number of calibration boxes"}}},
      {"sphere-orbit",
       {{"k", "k", "maximal word length"},
        {"base", "base", "base point x,y,z"},
        {"cap", "caps", "cap px,py,pz,theta (repeatable)", true},
        {"L", "L", "largest harmonic degree"},
        {"delta", "delta", "Minkowski exponent on the sphere"}}},
  };
  return table;
}

// Strings that read fully as integers or reals become JSON numbers.
json scalar(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(s, &used);
    if (used == s.size()) return i;
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

struct KindOptions {
  std::string kind;
  std::map<std::string, std::string> single;
  std::map<std::string, std::vector<std::string>> multi;
  bool search = false;
  CLI::App* app = nullptr;
};

struct Common {
  std::string config_path;
  std::string kernel_cache;
  std::string out;
  std::string out_json;
  std::string out_csv;
  std::uint64_t seed = 20240601;
  bool seed_given = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--kernel-cache", c.kernel_cache, "kernel table JSON, read when present and written otherwise");
  app->add_option("--out", c.out, "report path; a .csv extension selects the data output");
  app->add_option("--json", c.out_json, "JSON report path");
  app->add_option("--csv", c.out_csv, "CSV data path");
  app->add_option("--seed", c.seed, "random seed")->each([&](const std::string&) { c.seed_given = true; });
}

void add_kind(CLI::App* parent, const std::string& kind, KindOptions& o, Common& common) {
  o.kind = kind;
  o.app = parent->add_subcommand(kind, "run the " + kind + " experiment");
  for (const FlagSpec& f : flag_table().at(kind)) {
    const std::string name = std::string("--") + f.flag;
    if (f.multi)
      o.app->add_option(name, o.multi[f.key], f.help);
    else
      o.app->add_option(name, o.single[f.key], f.help);
  }
  if (kind == "lattice-scaling") o.app->add_flag("--search", o.search, "also minimize the bound over an R grid");
  add_common(o.app, common);
}

dforge::ExperimentConfig build_config(const KindOptions* kind, const Common& common) {
  dforge::ExperimentConfig cfg;
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) throw dforge::ConfigError("cannot read config " + common.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw dforge::ConfigError("config " + common.config_path + " is not JSON: " + e.what());
    }
    cfg = dforge::ExperimentConfig::from_json(j);
  }
  if (kind) {
    if (!common.config_path.empty() && cfg.kind != kind->kind && !(cfg.kind == "sphere" && kind->kind == "sphere-orbit"))
      throw dforge::ConfigError("config experiment '" + cfg.kind + "' does not match '" + kind->kind + "'");
    cfg.kind = kind->kind;
    for (const FlagSpec& f : flag_table().at(kind->kind)) {
      const std::string name = std::string("--") + f.flag;
      if (kind->app->count(name) == 0) continue;
      if (f.multi) {
        json arr = json::array();
        for (const auto& s : kind->multi.at(f.key)) arr.push_back(s);
        cfg.params[f.key] = arr;
      } else {
        cfg.params[f.key] = scalar(kind->single.at(f.key));
      }
    }
    if (kind->search) cfg.params["search"] = true;
  }
  if (cfg.kind.empty()) throw dforge::ConfigError("no experiment given (use a subcommand or run --config)");
  if (!common.kernel_cache.empty()) cfg.kernel_cache = common.kernel_cache;
  if (!common.out.empty()) {
    const bool csv = common.out.size() >= 4 && common.out.compare(common.out.size() - 4, 4, ".csv") == 0;
    (csv ? cfg.out_csv : cfg.out_json) = common.out;
  }
  if (!common.out_json.empty()) cfg.out_json = common.out_json;
  if (!common.out_csv.empty()) cfg.out_csv = common.out_csv;
  if (common.seed_given) cfg.seed = common.seed;
  return cfg;
}

int execute(const dforge::ExperimentConfig& cfg) {
  const dforge::ExperimentResult result = dforge::run_experiment(cfg);
  if (cfg.out_json.empty()) std::cout << result.report.dump(2) << "\n";
  std::cerr << cfg.kind << " [" << cfg.hash() << "]: " << (result.passed() ? "pass" : "INVARIANT VIOLATION")
            << "\n";
  for (const auto& f : result.failures()) std::cerr << "  violated " << f << "\n";
  return result.passed() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dforge: majorants, Erdos-Turan bounds and discrepancy experiments"};
  app.require_subcommand(1);

  Common common;
  std::map<std::string, KindOptions> direct, via_run;
  for (const auto& [kind, flags] : flag_table()) add_kind(&app, kind, direct[kind], common);

  CLI::App* run = app.add_subcommand("run", "run an experiment by kind, or from a JSON config");
  run->add_option("--config", common.config_path, "experiment config JSON");
  add_common(run, common);
  run->require_subcommand(0, 1);
  for (const auto& [kind, flags] : flag_table()) add_kind(run, kind, via_run[kind], common);
  // "sphere" is accepted as the experiment-kind spelling of sphere-orbit.
  via_run["sphere-orbit"].app->alias("sphere");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const KindOptions* chosen = nullptr;
    for (auto* table : {&direct, &via_run})
      for (auto& [kind, o] : *table)
        if (o.app->parsed()) chosen = &o;
    if (!chosen && !run->parsed()) throw dforge::ConfigError("no experiment given");
    return execute(build_config(chosen, common));
  } catch (const dforge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dforge::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const dforge::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
