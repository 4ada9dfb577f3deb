#pragma once

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace dforge::testing {

using Vertices = std::vector<std::array<double, 2>>;

// int over the polygon of exp(-2 pi i xi.x): nested adaptive Gauss-Kronrod on
// each fan triangle, Duffy-mapped to the unit square.
inline std::complex<double> polygon_ft_oracle(const Vertices& v, double xi1, double xi2) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::complex<double> total = 0.0;
  for (std::size_t t = 1; t + 1 < v.size(); ++t) {
    const auto& a = v[0];
    const auto& b = v[t];
    const auto& c = v[t + 1];
    const double area2 = std::abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
    for (int part = 0; part < 2; ++part) {
      auto outer = [&](double u) {
        auto inner = [&](double w) {
          const double x = a[0] + u * (b[0] - a[0]) + u * w * (c[0] - b[0]);
          const double y = a[1] + u * (b[1] - a[1]) + u * w * (c[1] - b[1]);
          const double ph = -two_pi * (xi1 * x + xi2 * y);
          return u * (part == 0 ? std::cos(ph) : std::sin(ph));
        };
        return GK::integrate(inner, 0.0, 1.0, 12, 1e-11);
      };
      const double val = area2 * GK::integrate(outer, 0.0, 1.0, 12, 1e-11);
      total += part == 0 ? std::complex<double>(val, 0.0) : std::complex<double>(0.0, val);
    }
  }
  return total;
}

// n vertices on a circle at sorted random angles: convex and counter-clockwise.
inline Vertices random_convex_polygon(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (;;) {
    const double cx = 0.3 + 0.4 * u(rng), cy = 0.3 + 0.4 * u(rng), r = 0.08 + 0.25 * u(rng);
    std::vector<double> ang(static_cast<std::size_t>(n));
    for (double& a : ang) a = two_pi * u(rng);
    std::sort(ang.begin(), ang.end());
    bool spread = true;  // keep vertices apart so no edge is vanishingly short
    for (int i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? ang[i + 1] - ang[i] : ang[0] + two_pi - ang[i];
      spread = spread && gap > 0.3;
    }
    if (!spread) continue;
    Vertices v;
    for (double a : ang) v.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    return v;
  }
}

}  // namespace dforge::testing
