#include "dforge/glp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dforge/error.hpp"
#include "dforge/pointsets.hpp"

namespace dforge {

namespace {

void check_modulus(long m) {
  if (!is_prime(m)) throw ConfigError("modulus m = " + std::to_string(m) + " is not prime");
}

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

long mod(long a, long m) {
  a %= m;
  return a < 0 ? a + m : a;
}

long inverse_mod(long a, long m) {
  // m prime: a^{m-2}
  long r = 1, b = mod(a, m), e = m - 2;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double congruence_sum(const std::vector<long>& g, long m, const ChainSystem& chains) {
  check_modulus(m);
  const int d = chains.dimension();
  if (static_cast<int>(g.size()) != d) throw ConfigError("generator dimension does not match chains");
  for (long gi : g)
    if (gi < 1 || gi > m - 1) throw ConfigError("generator entries must lie in [1, m-1]");
  std::vector<double> terms;
  for_each_frequency(d, static_cast<double>(m), false, FrequencySet::Bound::Open, [&](std::span<const int> k) {
    long s = 0;
    for (int i = 0; i < d; ++i) s = mod(s + k[i] * g[i], m);
    if (s == 0) terms.push_back(chains.phi(k));
  });
  return sorted_sum(std::move(terms));
}

double phi_sum(const ChainSystem& chains, double R, FrequencySet::Bound bound) {
  double sum = 0.0, comp = 0.0;  // Neumaier
  for_each_frequency(chains.dimension(), R, false, bound, [&](std::span<const int> k) {
    const double v = chains.phi(k);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  });
  return sum + comp;
}

double average_certificate(long m, const ChainSystem& chains) {
  check_modulus(m);
  return phi_sum(chains, static_cast<double>(m)) / static_cast<double>(m - 1);
}

long long congruence_solution_count(int d, int s, long m) {
  // Solutions of sum_{i<=s} k_i g_i = 0 with all g_i in (Z/m)^*: by inclusion
  // over characters, ((m-1)^s + (-1)^s (m-1)) / m; the other d - s
  // coordinates are free.
  const long long q = m - 1;
  const long long sign = (s % 2 == 0) ? 1 : -1;
  return ipow(q, d - s) * ((ipow(q, s) + sign * q) / m);
}

std::vector<double> congruence_table(long m, const ChainSystem& chains) {
  check_modulus(m);
  const int d = chains.dimension();
  if (d < 1 || d > 3) throw ConfigError("congruence table supports d = 1, 2, 3");
  const long q = m - 1;
  // Class index: (g_2, ..., g_d) with g_1 = 1, row-major over [1, m-1].
  const long long classes = ipow(q, d - 1);
  std::vector<std::vector<double>> terms(static_cast<std::size_t>(classes));
  for_each_frequency(d, static_cast<double>(m), false, FrequencySet::Bound::Open, [&](std::span<const int> k) {
    const double phi = chains.phi(k);
    if (d == 1) {
      if (mod(k[0], m) == 0) terms[0].push_back(phi);
      return;
    }
    // Enumerate g_2..g_{d-1}, solve for g_d.
    const long long inner = ipow(q, d - 2);
    for (long long c = 0; c < inner; ++c) {
      long s = mod(k[0], m);
      long long r = c;
      std::vector<long> mid(d - 2);
      for (int i = d - 3; i >= 0; --i) {
        mid[i] = static_cast<long>(r % q) + 1;
        r /= q;
      }
      for (int i = 0; i < d - 2; ++i) s = mod(s + k[i + 1] * mid[i], m);
      const long kd = mod(k[d - 1], m);
      if (kd == 0) {
        if (s != 0) continue;
        for (long gd = 1; gd <= q; ++gd) terms[static_cast<std::size_t>(c * q + gd - 1)].push_back(phi);
      } else {
        const long gd = mod(-s * inverse_mod(kd, m), m);
        if (gd == 0) continue;
        terms[static_cast<std::size_t>(c * q + gd - 1)].push_back(phi);
      }
    }
  });
  std::vector<double> class_value(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) class_value[i] = sorted_sum(std::move(terms[i]));

  // Expand: g = g_1 * (1, h_2, ..., h_d) with h_i = g_i g_1^{-1}.
  const long long total = ipow(q, d);
  std::vector<double> table(static_cast<std::size_t>(total));
  std::vector<long> g(d);
  for (long long idx = 0; idx < total; ++idx) {
    long long r = idx;
    for (int i = d - 1; i >= 0; --i) {
      g[i] = static_cast<long>(r % q) + 1;
      r /= q;
    }
    const long inv = inverse_mod(g[0], m);
    long long cls = 0;
    for (int i = 1; i < d; ++i) cls = cls * q + (mod(g[i] * inv, m) - 1);
    table[static_cast<std::size_t>(idx)] = class_value[static_cast<std::size_t>(cls)];
  }
  return table;
}

GlpStrategy GlpStrategy::parse(const std::string& name, long samples, std::uint64_t seed) {
  GlpStrategy s;
  s.samples = samples;
  s.seed = seed;
  if (name == "exhaustive") s.kind = Kind::Exhaustive;
  else if (name == "random") {
    s.kind = Kind::Random;
    if (samples < 1) throw ConfigError("random strategy needs a positive sample count");
  } else if (name == "korobov-rank1" || name == "korobov") s.kind = Kind::KorobovRank1;
  else throw ConfigError("unknown strategy '" + name + "' (exhaustive, random, korobov-rank1)");
  return s;
}

std::string GlpStrategy::name() const {
  switch (kind) {
    case Kind::Exhaustive:
      return "exhaustive";
    case Kind::Random:
      return "random";
    default:
      return "korobov-rank1";
  }
}

double GlpCertificate::value_constant() const {
  return value * m / std::pow(std::log(static_cast<double>(m)), static_cast<double>(g.size()));
}

double GlpCertificate::average_constant() const {
  return average * m / std::pow(std::log(static_cast<double>(m)), static_cast<double>(g.size()));
}

GlpCertificate glp_search(long m, const ChainSystem& chains, const GlpStrategy& strategy) {
  check_modulus(m);
  const int d = chains.dimension();
  const long q = m - 1;
  GlpCertificate cert;
  cert.m = m;
  cert.strategy = strategy;
  cert.average = average_certificate(m, chains);

  auto unpack = [&](long long idx) {
    std::vector<long> g(d);
    for (int i = d - 1; i >= 0; --i) {
      g[i] = static_cast<long>(idx % q) + 1;
      idx /= q;
    }
    return g;
  };

  switch (strategy.kind) {
    case GlpStrategy::Kind::Exhaustive: {
      if (static_cast<double>(ipow(q, d)) > 1e7)
        throw ConfigError("exhaustive search infeasible: (m-1)^d exceeds 1e7");
      const auto table = congruence_table(m, chains);
      const auto best = std::min_element(table.begin(), table.end()) - table.begin();
      cert.g = unpack(best);
      cert.value = table[static_cast<std::size_t>(best)];
      cert.candidates = static_cast<long>(table.size());
      break;
    }
    case GlpStrategy::Kind::Random: {
      std::mt19937_64 rng(strategy.seed);
      std::uniform_int_distribution<long> u(1, q);
      cert.value = 1e300;
      for (long s = 0; s < strategy.samples; ++s) {
        std::vector<long> g(d);
        for (auto& gi : g) gi = u(rng);
        const double v = congruence_sum(g, m, chains);
        if (v < cert.value) {
          cert.value = v;
          cert.g = g;
        }
      }
      cert.candidates = strategy.samples;
      break;
    }
    case GlpStrategy::Kind::KorobovRank1: {
      cert.value = 1e300;
      for (long a = 1; a <= q; ++a) {
        std::vector<long> g(d);
        long p = 1;
        for (auto& gi : g) {
          gi = p;
          p = p * a % m;
        }
        const double v = congruence_sum(g, m, chains);
        if (v < cert.value) {
          cert.value = v;
          cert.g = g;
        }
      }
      cert.candidates = q;
      break;
    }
  }
  return cert;
}

}  // namespace dforge
