#include <cmath>
#include <map>

#include "doctest.h"
#include "dforge/error.hpp"
#include "dforge/glp.hpp"
#include "support.hpp"

using namespace dforge;
using dforge::testing::kPi;

namespace {

// Coordinate chains in d = 2 written out by hand.
double phi_hand(int k1, int k2) {
  auto f = [](double t) { return t == 0.0 ? 1.0 : std::min(1.0, 1.0 / (2.0 * kPi * t)); };
  const double n = std::hypot(k1, k2);
  return f(n) * (f(std::abs(k1)) + f(std::abs(k2)));
}

long mod(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

TEST_CASE("congruence sum for g = (1,1), m = 5 matches a manual enumeration") {
  const ChainSystem c = ChainSystem::coordinate(2);
  double expect = 0.0;
  int count = 0;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      if ((a == 0 && b == 0) || a * a + b * b >= 25) continue;
      if (mod(a + b, 5) != 0) continue;
      expect += phi_hand(a, b);
      ++count;
    }
  CHECK(count > 0);
  CHECK(count <= 80);
  CHECK(congruence_sum({1, 1}, 5, c) == doctest::Approx(expect).epsilon(1e-13));
  CHECK_THROWS_AS(congruence_sum({1, 1}, 6, c), ConfigError);
}

TEST_CASE("g and m - g give equal sums") {
  const ChainSystem c = ChainSystem::coordinate(2);
  for (long m : {7L, 101L})
    for (long g2 : {2L, 3L, 5L}) CHECK(congruence_sum({1, g2}, m, c) == doctest::Approx(congruence_sum({m - 1, m - g2}, m, c)));
}

TEST_CASE("m = 5 exhaustive table matches a double-loop brute force") {
  const ChainSystem c = ChainSystem::coordinate(2);
  const std::vector<double> table = congruence_table(5, c);
  REQUIRE(table.size() == 16);
  for (long g1 = 1; g1 < 5; ++g1)
    for (long g2 = 1; g2 < 5; ++g2) {
      double s = 0.0;
      for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b)
          if (!(a == 0 && b == 0) && a * a + b * b < 25 && mod(g1 * a + g2 * b, 5) == 0) s += phi_hand(a, b);
      CHECK(table[static_cast<std::size_t>((g1 - 1) * 4 + (g2 - 1))] == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("averaging identity in exact counts, m = 5 and 7") {
  const ChainSystem c = ChainSystem::coordinate(2);
  for (long m : {5L, 7L}) {
    // per k: number of g in [1,m-1]^2 with g.k = 0 (mod m), by brute force and by the closed form
    double weighted = 0.0;
    for (int a = -(int)m + 1; a < m; ++a)
      for (int b = -(int)m + 1; b < m; ++b) {
        if ((a == 0 && b == 0) || a * a + b * b >= m * m) continue;
        long count = 0;
        for (long g1 = 1; g1 < m; ++g1)
          for (long g2 = 1; g2 < m; ++g2) count += mod(g1 * a + g2 * b, m) == 0;
        const int s = (mod(a, m) != 0) + (mod(b, m) != 0);
        REQUIRE(count == congruence_solution_count(2, s, m));
        weighted += phi_hand(a, b) * static_cast<double>(count);
      }
    const std::vector<double> table = congruence_table(m, c);
    double mean = 0.0;
    for (double v : table) mean += v;
    mean /= static_cast<double>(table.size());
    CHECK(mean == doctest::Approx(weighted / static_cast<double>((m - 1) * (m - 1))).epsilon(1e-12));
    // the average certificate dominates the mean, since each k is hit at most (m-1) times
    CHECK(mean <= average_certificate(m, c) + 1e-15);
  }
}

TEST_CASE("exhaustive search: value <= average, beats random, certificate fields") {
  const ChainSystem c = ChainSystem::coordinate(2);
  const GlpCertificate ex = glp_search(101, c, GlpStrategy::parse("exhaustive", 0, 0));
  CHECK(ex.value <= ex.average);
  CHECK(ex.g.size() == 2);
  for (long g : ex.g) {
    CHECK(g >= 1);
    CHECK(g <= 100);
  }
  CHECK(ex.candidates == 100 * 100);
  CHECK(ex.value == doctest::Approx(congruence_sum(ex.g, 101, c)));
  const GlpCertificate rnd = glp_search(101, c, GlpStrategy::parse("random", 200, 17));
  CHECK(ex.value <= rnd.value);
  CHECK(rnd.average == ex.average);
  const GlpCertificate kr = glp_search(101, c, GlpStrategy::parse("korobov-rank1", 0, 0));
  CHECK(kr.g[0] == 1);
  CHECK(ex.value <= kr.value);
  CHECK(ex.value_constant() == doctest::Approx(ex.value * 101 / std::pow(std::log(101.0), 2)));
}

TEST_CASE("search errors") {
  const ChainSystem c = ChainSystem::coordinate(2);
  CHECK_THROWS_AS(glp_search(100, c, GlpStrategy{}), ConfigError);
  CHECK_THROWS_AS(glp_search(4099, c, GlpStrategy{}), ConfigError);  // (m-1)^2 > 1e7
  CHECK_THROWS_AS(GlpStrategy::parse("cbc", 0, 0), ConfigError);
}

TEST_CASE("chain sum over the ball grows like log^2") {
  const ChainSystem c = ChainSystem::coordinate(2);
  std::vector<double> r;
  for (double R : {16.0, 64.0, 256.0, 1024.0})
    r.push_back(phi_sum(c, R, FrequencySet::Bound::Closed) / std::pow(std::log(2.0 + R), 2));
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  CHECK(*hi / *lo < 4.0);
  // open and closed ranges differ only on the sphere |k| = R
  CHECK(phi_sum(c, 5.0, FrequencySet::Bound::Closed) - phi_sum(c, 5.0) ==
        doctest::Approx(phi_hand(5, 0) * 2 + phi_hand(0, 5) * 2 + 4 * phi_hand(3, 4) + 4 * phi_hand(4, 3)));
}
