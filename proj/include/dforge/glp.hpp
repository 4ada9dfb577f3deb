#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dforge/chains.hpp"
#include "dforge/frequencies.hpp"

namespace dforge {

// sum_{0<|k|<m, g.k = 0 mod m} Phi(k), terms added in increasing magnitude.
double congruence_sum(const std::vector<long>& g, long m, const ChainSystem& chains);

// sum of Phi(k) over 0 < |k| < R (Open) or 1 <= |k| <= R (Closed), compensated.
double phi_sum(const ChainSystem& chains, double R, FrequencySet::Bound bound = FrequencySet::Bound::Open);

// (m-1)^{-1} sum_{0<|k|<m} Phi(k)
double average_certificate(long m, const ChainSystem& chains);

// Number of g in [1, m-1]^d with g.k = 0 mod m, by the closed form in the
// count s of coordinates of k that are nonzero mod m.
long long congruence_solution_count(int d, int s, long m);

// Congruence sums for every g in [1, m-1]^d (row-major, last coordinate
// fastest). Uses the scaling invariance g -> c g to work per class g_1 = 1.
std::vector<double> congruence_table(long m, const ChainSystem& chains);

struct GlpStrategy {
  enum class Kind { Exhaustive, Random, KorobovRank1 };
  Kind kind = Kind::Exhaustive;
  long samples = 0;        // random
  std::uint64_t seed = 0;  // random
  static GlpStrategy parse(const std::string& name, long samples, std::uint64_t seed);
  std::string name() const;
};

struct GlpCertificate {
  long m = 0;
  std::vector<long> g;
  double value = 0.0;
  double average = 0.0;
  GlpStrategy strategy;
  long candidates = 0;
  double ratio() const { return value / average; }
  // value and average scaled by m / log^d(m)
  double value_constant() const;
  double average_constant() const;
};

GlpCertificate glp_search(long m, const ChainSystem& chains, const GlpStrategy& strategy);

}  // namespace dforge
