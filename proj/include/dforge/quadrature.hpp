#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "dforge/error.hpp"

namespace dforge {

inline std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Composite 16-point Gauss-Legendre on [a, b], doubling the panel count until
// two successive values agree to max(rel_tol * |value|, abs_tol). Throws
// NumericalError when 4096 panels are not enough.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                          const char* what = "integral") {
  if (b <= a) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 16>;
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) s += Rule::integrate(f, a + p * h, a + (p + 1) * h);
    return s;
  };
  double prev = composite(2);
  double change = 0.0;
  for (int panels = 4; panels <= 4096; panels *= 2) {
    const double next = composite(panels);
    change = std::abs(next - prev);
    if (change <= std::max(rel_tol * std::abs(next), abs_tol)) return next;
    prev = next;
  }
  throw NumericalError(std::string("quadrature did not converge: ") + what + " (last change " +
                       fmt_sci(change) + ", value " + fmt_sci(prev) + " on [" + fmt_sci(a) + ", " +
                       fmt_sci(b) + "])");
}

// Fixed-order composite Gauss-Legendre rule on [a, b] with `panels` panels.
template <unsigned Points>
struct CompositeGauss {
  std::vector<double> nodes;
  std::vector<double> weights;

  CompositeGauss(double a, double b, int panels) {
    using Rule = boost::math::quadrature::gauss<double, Points>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      const double half = 0.5 * h;
      // boost stores the non-negative half of a symmetric rule
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
          nodes.push_back(mid);
          weights.push_back(w[i] * half);
        } else {
          nodes.push_back(mid - half * x[i]);
          weights.push_back(w[i] * half);
          nodes.push_back(mid + half * x[i]);
          weights.push_back(w[i] * half);
        }
      }
    }
  }
};

}  // namespace dforge
