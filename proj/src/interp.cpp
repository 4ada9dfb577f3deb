#include "dforge/interp.hpp"

#include <cmath>

#include "dforge/error.hpp"

namespace dforge {

MonotoneCubic::MonotoneCubic(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {
  if (values_.size() < 2 || !(step_ > 0.0)) {
    throw ConfigError("MonotoneCubic needs at least two samples and a positive step");
  }
  const std::size_t n = values_.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (values_[i + 1] - values_[i]) / step_;

  slopes_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = delta[i - 1];
    const double b = delta[i];
    if (a * b > 0.0) slopes_[i] = 2.0 * a * b / (a + b);  // harmonic mean, equal spacing
  }
  // One-sided three-point end slopes, limited to keep monotonicity.
  auto end_slope = [](double d0, double d1) {
    double s = (3.0 * d0 - d1) / 2.0;
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
    return s;
  };
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
  } else {
    slopes_[0] = end_slope(delta[0], delta[1]);
    slopes_[n - 1] = end_slope(delta[n - 2], delta[n - 3]);
  }
}

double MonotoneCubic::operator()(double x) const {
  const double u = (x - origin_) / step_;
  const auto last = static_cast<double>(values_.size() - 1);
  if (u <= 0.0) return values_.front();
  if (u >= last) return values_.back();
  const auto i = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] +
         h11 * step_ * slopes_[i + 1];
}

}  // namespace dforge
