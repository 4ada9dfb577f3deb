#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "dforge/kernel.hpp"

namespace dforge {

// One named check inside an experiment: passed when observed <relation> budget.
struct Check {
  std::string name;
  bool passed = true;
  double observed = 0.0;
  double budget = 0.0;
  std::string relation;  // "<=", ">=", "==", "in"
};

void to_json(nlohmann::json& j, const Check& c);

struct ExperimentConfig {
  std::string kind;  // kernel-build | sandwich | bound | lattice-scaling | kronecker-scaling |
                     // glp-search | polytope-family | sphere-orbit
  nlohmann::json params = nlohmann::json::object();
  std::string kernel_cache;
  std::string out_json;
  std::string out_csv;
  std::uint64_t seed = 20240601;
  std::string tolerance_profile = "default";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  // FNV-1a 64 of the canonical dump of kind, params, seed and tolerance profile.
  std::string hash() const;
};

struct ExperimentResult {
  nlohmann::json report;
  std::vector<Check> checks;
  bool passed() const;
  std::vector<std::string> failures() const;
};

const std::vector<std::string>& experiment_kinds();

// Runs the experiment; writes out_csv when set (and out_json when set).
ExperimentResult run_experiment(const ExperimentConfig& config);

// Kernel for dimension d: from the cache file (explicit path, or the
// directory in DISCREPANCY_FORGE_CACHE) when present, otherwise built.
KernelTable experiment_kernel(const KernelConfig& kc, const std::string& cache_path);
nlohmann::json kernel_provenance(const KernelTable& kernel);

std::string fnv1a_hex(const std::string& text);

}  // namespace dforge
