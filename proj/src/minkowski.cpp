#include "dforge/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dforge/error.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;

// Area of [-1/2,1/2]^2 intersected with the disk of radius s about 0; this is
// the torus area of a periodic disk.
double periodic_disk_area(double s) {
  if (s <= 0.0) return 0.0;
  if (s <= 0.5) return kPi * s * s;
  if (s >= std::sqrt(0.5)) return 1.0;
  const double segment = s * s * std::acos(0.5 / s) - 0.5 * std::sqrt(s * s - 0.25);
  return kPi * s * s - 4.0 * segment;
}

// Area of {u in [0,h1]x[0,h2] : |u| < t}.
double quarter_disk_in_rect(double h1, double h2, double t) {
  if (t <= 0.0) return 0.0;
  auto prim = [t](double u) { return 0.5 * (u * std::sqrt(std::max(t * t - u * u, 0.0)) + t * t * std::asin(std::min(u / t, 1.0))); };
  const double top = std::min(h1, t);
  const double flat = std::min(top, std::sqrt(std::max(t * t - h2 * h2, 0.0)));
  return h2 * flat + prim(top) - prim(flat);
}

double box_shell(const Box& b, double t) {
  const std::size_t d = b.lower.size();
  double inner_far = 1.0;
  for (std::size_t j = 0; j < d; ++j) inner_far *= std::max(b.upper[j] - b.lower[j] - 2.0 * t, 0.0);
  if (d == 1) {
    const double w = b.upper[0] - b.lower[0];
    return 1.0 - inner_far - std::max(1.0 - w - 2.0 * t, 0.0);
  }
  // Outside the box the distance is |(delta_1, delta_2)| with delta_j the
  // circular distance from x_j to [a_j, b_j]: zero with probability w_j,
  // otherwise uniform on [0, g_j/2] with density 2.
  const double w1 = b.upper[0] - b.lower[0], w2 = b.upper[1] - b.lower[1];
  const double g1 = 1.0 - w1, g2 = 1.0 - w2;
  const double outer_near = w1 * std::min(2.0 * t, g2) + w2 * std::min(2.0 * t, g1) +
                            4.0 * quarter_disk_in_rect(0.5 * g1, 0.5 * g2, t);
  const double outer_far = (1.0 - w1 * w2) - outer_near;
  return std::clamp(1.0 - inner_far - outer_far, 0.0, 1.0);
}

}  // namespace

ShellProfile::ShellProfile(const TorusSet& set, std::size_t samples, std::uint64_t seed) : set_(set) {
  const int d = set.dimension();
  exact_ = (set.kind() == TorusSet::Kind::Box && d <= 2) ||
           (set.kind() == TorusSet::Kind::Ball && d == 2);
  if (exact_) return;
  if (samples < 1000) throw ConfigError("Monte Carlo shell measure needs at least 1000 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  distances_.resize(samples);
  std::vector<double> x(d);
  for (auto& dist : distances_) {
    for (auto& c : x) c = u(rng);
    dist = set.boundary_distance(x);
  }
  std::sort(distances_.begin(), distances_.end());
}

ShellMeasure ShellProfile::operator()(double t) const {
  if (t <= 0.0) return {};
  if (exact_) {
    if (set_.kind() == TorusSet::Kind::Box) return {box_shell(set_.as_box(), t), 0.0};
    const double r = set_.as_ball().radius;
    const double outer = periodic_disk_area(r + t);
    const double inner = t < r ? kPi * (r - t) * (r - t) : 0.0;
    return {std::min(outer - inner, 1.0), 0.0};
  }
  const auto n = static_cast<double>(distances_.size());
  const double p =
      static_cast<double>(std::lower_bound(distances_.begin(), distances_.end(), t) - distances_.begin()) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

std::vector<double> minkowski_t_grid(int points, double lo, double hi) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw ConfigError("bad Minkowski t grid");
  std::vector<double> t(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) t[i] = lo * std::exp(step * i);
  t.back() = hi;
  return t;
}

MinkowskiContent minkowski_content(const ShellProfile& shell, double alpha,
                                   const std::vector<double>& t_grid) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("Minkowski exponent must lie in [0, 1]");
  MinkowskiContent m;
  m.exact = shell.exact();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const ShellMeasure s = shell(t);
    const double v = std::pow(t, -alpha) * s.value;
    if (v > m.value) {
      m.value = v;
      m.t_at_sup = t;
      m.standard_error = std::pow(t, -alpha) * s.standard_error;
      arg = i;
    }
  }
  m.boundary_attained = arg == 0 || arg + 1 == t_grid.size();
  return m;
}

MinkowskiContent minkowski_content(const TorusSet& set, double alpha, const std::vector<double>& t_grid) {
  return minkowski_content(ShellProfile(set), alpha, t_grid);
}

}  // namespace dforge
