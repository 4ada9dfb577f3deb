#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "dforge/error.hpp"
#include "dforge/torus_set.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;
using Vec2 = std::array<double, 2>;
using Gauss16 = boost::math::quadrature::gauss<double, 16>;

Complex plane_wave(std::span<const double> xi, double x, double y) {
  return std::polar(1.0, -2.0 * kPi * (xi[0] * x + xi[1] * y));
}

// 16-point rule on [0, 1] as (node, weight) pairs.
const std::vector<std::pair<double, double>>& unit_rule() {
  static const std::vector<std::pair<double, double>> rule = [] {
    std::vector<std::pair<double, double>> r;
    const auto& x = Gauss16::abscissa();
    const auto& w = Gauss16::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.emplace_back(0.5 - 0.5 * x[i], 0.5 * w[i]);
      if (x[i] != 0.0) r.emplace_back(0.5 + 0.5 * x[i], 0.5 * w[i]);
    }
    return r;
  }();
  return rule;
}

// One-dimensional face: the segment p -> q.
Complex edge_integral(const Vec2& p, const Vec2& q, std::span<const double> xi, double lambda) {
  const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
  const double ux = (q[0] - p[0]) / len, uy = (q[1] - p[1]) / len;
  const double beta = xi[0] * ux + xi[1] * uy;  // P_edge xi = beta u
  if (2.0 * kPi * std::abs(beta) * lambda >= 1.0) {
    // Vertices are the boundary of the segment, outward normals -u at p, +u at q.
    return Complex(0.0, 1.0 / (2.0 * kPi * beta)) *
           (plane_wave(xi, q[0], q[1]) - plane_wave(xi, p[0], p[1]));
  }
  Complex s = 0.0;
  for (const auto& [t, w] : unit_rule()) s += w * plane_wave(xi, p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]));
  return s * len;
}

// Collapsed tensor rule on each triangle of a fan from vertex 0.
Complex fan_quadrature(const Polygon& poly, std::span<const double> xi) {
  const auto& v = poly.vertices;
  Complex total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Vec2& a = v[0];
    const Vec2& b = v[i];
    const Vec2& c = v[i + 1];
    const double jac = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    Complex tri = 0.0;
    for (const auto& [s, ws] : unit_rule()) {
      for (const auto& [t, wt] : unit_rule()) {
        const double x = a[0] + s * (b[0] - a[0]) + s * t * (c[0] - b[0]);
        const double y = a[1] + s * (b[1] - a[1]) + s * t * (c[1] - b[1]);
        tri += ws * wt * s * plane_wave(xi, x, y);
      }
    }
    total += jac * tri;
  }
  return total;
}

}  // namespace

double polygon_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    s += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * s;
}

double polygon_diameter(const Polygon& poly) {
  double best = 0.0;
  for (const auto& p : poly.vertices)
    for (const auto& q : poly.vertices) best = std::max(best, std::hypot(p[0] - q[0], p[1] - q[1]));
  return best;
}

Complex polygon_fourier_transform(const Polygon& poly, std::span<const double> xi) {
  if (xi.size() != 2) throw ConfigError("polygon transform needs a planar frequency");
  const double lambda = polygon_diameter(poly);
  const double q2 = xi[0] * xi[0] + xi[1] * xi[1];
  if (2.0 * kPi * std::sqrt(q2) * lambda < 1.0) return fan_quadrature(poly, xi);
  const auto& v = poly.vertices;
  Complex total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    // outward normal of a counter-clockwise edge
    const double nx = (q[1] - p[1]) / len, ny = -(q[0] - p[0]) / len;
    const double coef = (nx * xi[0] + ny * xi[1]) / (2.0 * kPi * q2);
    total += Complex(0.0, coef) * edge_integral(p, q, xi, lambda);
  }
  return total;
}

double polytope_ft_bound(const Polygon& poly, std::span<const double> xi) {
  const double lambda = polygon_diameter(poly);
  auto term = [lambda](double proj) {
    return proj > 0.0 ? std::min(lambda, 1.0 / (2.0 * kPi * proj)) : lambda;
  };
  const double full = term(std::hypot(xi[0], xi[1]));
  const auto& v = poly.vertices;
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    const double beta = (xi[0] * (q[0] - p[0]) + xi[1] * (q[1] - p[1])) / len;
    sum += full * term(std::abs(beta));
  }
  return 2.0 * sum;
}

}  // namespace dforge
