#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "dforge/error.hpp"
#include "dforge/kernel.hpp"
#include "support.hpp"

using namespace dforge;
using dforge::testing::kernel;
using dforge::testing::kPi;

namespace {

double raw_bump(double r) { return r < 0.5 ? std::exp(-1.0 / (0.25 - r * r)) : 0.0; }

}  // namespace

TEST_CASE("bump vanishes on its support boundary") {
  const BumpProfile b = BumpProfile::build(1, 1.0 / 256);
  CHECK(b(0.5) == 0.0);
  CHECK(b(0.7) == 0.0);
  CHECK(b(0.0) > 0.0);
}

TEST_CASE("bump is L2-normalized") {
  for (int d = 1; d <= 3; ++d) {
    const BumpProfile b = BumpProfile::build(d, 1.0 / 256);
    CHECK(b.l2_norm_squared() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("c_2 matches a tanh-sinh quadrature of the unnormalized square") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double raw = ts.integrate([](double r) { return 2.0 * kPi * r * raw_bump(r) * raw_bump(r); }, 0.0, 0.5);
  const double c2 = 1.0 / std::sqrt(raw);
  const BumpProfile b = BumpProfile::build(2, 1.0 / 256);
  CHECK(std::abs(b.normalization() / c2 - 1.0) < 1e-6);
}

TEST_CASE("unsupported dimensions and bad steps are config errors") {
  CHECK_THROWS_AS(BumpProfile::build(4, 1.0 / 256), ConfigError);
  CHECK_THROWS_AS(BumpProfile::build(2, 0.1), ConfigError);
  KernelConfig kc;
  kc.x_max = 10;
  CHECK_THROWS_AS(kc.validate(), ConfigError);
}

TEST_CASE("autocorrelation: one at the origin, zero at radius one") {
  for (int d = 1; d <= 3; ++d) {
    const BumpProfile b = BumpProfile::build(d, 1.0 / 256);
    CHECK(autocorrelation_at(b, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(autocorrelation_at(b, 1.0) == 0.0);
  }
}

TEST_CASE("autocorrelation at 1/2 agrees with a Monte Carlo convolution") {
  const BumpProfile b = BumpProfile::build(2, 1.0 / 256);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const long n = 4000000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double y1 = u(rng), y2 = u(rng);
    const double v = b(std::hypot(y1, y2)) * b(std::hypot(0.5 - y1, y2));  // square [-1/2,1/2]^2 has area 1
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(autocorrelation_at(b, 0.5) - mean) <= 3.0 * se);
}

TEST_CASE("kernel table claims, d = 2") {
  const KernelTable& k = kernel(2);
  CHECK(k.tail(0.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(k.khat(0.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(k.khat(1.0) == 0.0);
  CHECK(k.khat(1.3) == 0.0);
  CHECK(k.min_k() >= -k.config().quadrature_tolerance);
  CHECK(std::abs(k.mean_trapezoid() - 1.0) <= 1e-5);
  const double e2p = std::exp(-2.0 * kPi);
  CHECK(e2p == doctest::Approx(1.867442e-3).epsilon(1e-6));
  for (double t = 0.0; t <= k.config().t_max - 1.0; t += k.config().table_step)
    REQUIRE(k.tail(t + 1.0) >= e2p * k.tail(t) - 1e-9);
}

TEST_CASE("tail mass is nonincreasing and psi is 4 gamma I(t/2)") {
  const KernelTable& k = kernel(2);
  CHECK(k.psi(0.0) == doctest::Approx(4.0 * k.gamma()).epsilon(1e-6));
  double prev = k.psi(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double t = 60.0 * i / 1000.0;
    const double v = k.psi(t);
    REQUIRE(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(k.psi(-1.0), ConfigError);
  CHECK(k.psi(1000.0) >= 0.0);
}

TEST_CASE("gamma agrees with a Monte Carlo integral of K over the unit ball") {
  const KernelTable& k = kernel(2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const long n = 2000000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng);
    const double r = std::hypot(x, y);
    const double v = r <= 1.0 ? 4.0 * k.k(r) : 0.0;
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  const double inner = std::exp(2.0 * kPi) / k.gamma();
  CHECK(std::abs(inner - mean) <= 3.0 * se);
}

TEST_CASE("I(t) agrees with the Fourier-side route 1 - 2 pi t int Khat J1(2 pi t rho)") {
  const KernelTable& k = kernel(2);
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double inner = gk.integrate(
        [&](double rho) { return 2.0 * kPi * t * k.khat(rho) * ::j1(2.0 * kPi * t * rho); }, 0.0, 1.0, 15, 1e-12);
    CHECK(std::abs((1.0 - inner) - k.tail(t)) < 1e-6);
  }
}

TEST_CASE("transform round trip recovers Khat") {
  const KernelTable& k = kernel(2);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double rho = i / 200.0;
    worst = std::max(worst, std::abs(k.khat_from_table(rho) - k.khat(rho)));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("decay constant c(4) is finite and below 1e6") {
  const KernelTable& k = kernel(2);
  const double c4 = decay_constant(k, 4.0);
  CHECK(std::isfinite(c4));
  CHECK(c4 < 1e6);
  CHECK(decay_constant(k, 2.0) <= c4);
  CHECK(c4 <= decay_constant(k, 8.0));
}

TEST_CASE("kernels in d = 1 and d = 3 satisfy the same claims") {
  for (int d : {1, 3}) {
    const KernelTable& k = kernel(d);
    CHECK(k.tail(0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(k.min_k() >= -k.config().quadrature_tolerance);
    CHECK(std::abs(k.mean_trapezoid() - 1.0) <= 1e-5);
    CHECK(k.gamma() > 0.0);
  }
}

TEST_CASE("kernel tables round-trip through JSON") {
  const KernelTable& k = kernel(2);
  const auto path = std::filesystem::temp_directory_path() / "dforge_test_kernel.json";
  k.save(path.string());
  const KernelTable back = KernelTable::load(path.string());
  std::filesystem::remove(path);
  CHECK(back.gamma() == k.gamma());
  CHECK(back.to_json().dump() == k.to_json().dump());
  for (double t : {0.0, 0.3, 1.7, 5.0, 30.0}) CHECK(back.tail(t) == k.tail(t));

  nlohmann::json bad = k.to_json();
  bad["version"] = 99;
  CHECK_THROWS_AS(KernelTable::from_json(bad), ConfigError);
}
