#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "dforge/error.hpp"
#include "dforge/majorant.hpp"
#include "support.hpp"

using namespace dforge;
using dforge::testing::kernel;

namespace {

const TorusSet& ball() {
  static const TorusSet b = TorusSet::ball({0.5, 0.5}, 0.25);
  return b;
}

const MajorantPair& pair16() {
  static const MajorantPair p = majorant_pair(ball(), kernel(2), 16.0);
  return p;
}

}  // namespace

TEST_CASE("coefficients vanish outside |k| < R and are Hermitian") {
  const MajorantPair& p = pair16();
  const int far[2] = {16, 0}, edge[2] = {12, 12}, in[2] = {15, 0};
  CHECK(p.A.coefficient(far) == Complex(0.0));
  CHECK(p.B.coefficient(edge) == Complex(0.0));
  CHECK(p.B.coefficient(in) != Complex(0.0));
  for (std::size_t i = 0; i < p.A.frequencies().size(); ++i) REQUIRE(p.A.frequencies().norm(i) < 16.0);
  CHECK(p.A.hermitian_defect() < 1e-12);
  CHECK(p.B.hermitian_defect() < 1e-12);
}

TEST_CASE("mean values: B(0) - A(0) = 2 H(0) and A(0) <= mu <= B(0)") {
  const MajorantPair& p = pair16();
  const HCoefficients h(ball(), kernel(2), 16.0);
  const int zero[2] = {0, 0};
  const double a0 = p.A.coefficient(zero).real(), b0 = p.B.coefficient(zero).real();
  CHECK(b0 - a0 == doctest::Approx(2.0 * kernel(2).khat(0.0) * h(zero).real()).epsilon(1e-12));
  CHECK(b0 - a0 >= 0.0);
  CHECK(a0 <= ball().measure());
  CHECK(ball().measure() <= b0);
}

TEST_CASE("FFT synthesis agrees with direct summation") {
  const MajorantPair& p = pair16();
  const int n = 64;
  const std::vector<double> grid = p.B.synthesize(n);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < 50; ++t) {
    const int i = pick(rng), j = pick(rng);
    const double x[2] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
    REQUIRE(std::abs(grid[static_cast<std::size_t>(i) * n + j] - p.B.evaluate(x)) < 1e-10);
  }
  CHECK_THROWS_AS(p.B.synthesize(16), ConfigError);
}

TEST_CASE("sandwich on a 512 grid, ball r = 1/4, R in {8, 16, 32}") {
  for (double R : {8.0, 16.0, 32.0}) {
    const MajorantPair p = majorant_pair(ball(), kernel(2), R);
    const SandwichReport rep = sandwich_report(p, ball(), kernel(2), 512);
    CAPTURE(R);
    CHECK(rep.minorant.max_violation <= rep.budget);
    CHECK(rep.majorant.max_violation <= rep.budget);
    CHECK(rep.width.max_violation <= rep.budget);
    CHECK(rep.budget <= 1e-3);
    CHECK(rep.far_field_max_width <= rep.far_field_psi + rep.budget);
    CHECK(rep.far_field_psi == doctest::Approx(kernel(2).psi(8.0)));
    CHECK(rep.within_budget());
  }
}

TEST_CASE("sandwich CSV has the documented columns") {
  const auto path = std::filesystem::temp_directory_path() / "dforge_test_sandwich.csv";
  const MajorantPair p = majorant_pair(ball(), kernel(2), 8.0);
  sandwich_report(p, ball(), kernel(2), 32, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,chi,A,B,psi_bound");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 32 * 32);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(sandwich_report(p, ball(), kernel(2), 16), ConfigError);
}

TEST_CASE("smoothing claim |chi - K_R * chi| <= I(R dist) at random points") {
  for (const TorusSet& s : {ball(), TorusSet::box({0.1, 0.2}, {0.6, 0.5})}) {
    const double excess = smoothing_claim_excess(s, kernel(2), 16.0, 100, 99);
    CHECK(excess <= pair16().budget);
  }
}

TEST_CASE("polynomials serialize their coefficients") {
  const nlohmann::json j = pair16().A.to_json();
  CHECK(j.at("degree").get<double>() == 16.0);
  CHECK(j.at("coefficients").size() == pair16().A.frequencies().size());
}

TEST_CASE("majorant_pair rejects small R and mismatched dimensions") {
  CHECK_THROWS_AS(majorant_pair(ball(), kernel(2), 2.0), ConfigError);
  CHECK_THROWS_AS(majorant_pair(TorusSet::ball({0.5}, 0.25), kernel(2), 8.0), ConfigError);
}
