#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace dforge {

using Complex = std::complex<double>;

// Half-open box [a_1, b_1) x ... x [a_d, b_d) with 0 <= a_j < b_j <= 1.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Closed Euclidean ball, radius < 1/2.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

// Closed convex polygon in the plane, vertices counter-clockwise. The
// separation epsilon is required: diameter < 1 - epsilon.
struct Polygon {
  std::vector<std::array<double, 2>> vertices;
  double epsilon = 0.0;
};

// Omega = Omega* + Z^d on the torus, Omega* one of the three shapes above.
class TorusSet {
 public:
  enum class Kind { Box, Ball, Polygon };

  static TorusSet box(std::vector<double> lower, std::vector<double> upper);
  static TorusSet ball(std::vector<double> center, double radius);
  static TorusSet polygon(std::vector<std::array<double, 2>> vertices, double epsilon);

  int dimension() const { return d_; }
  Kind kind() const;
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }
  const Polygon& as_polygon() const { return std::get<Polygon>(shape_); }

  double measure() const;
  double diameter() const;
  // Midpoint of the bounding box of Omega*.
  const std::vector<double>& anchor() const { return anchor_; }

  // Membership of a torus point (any real coordinates, reduced mod 1).
  bool contains(std::span<const double> x) const;
  // Distance from x to the periodic boundary dOmega* + Z^d.
  double boundary_distance(std::span<const double> x) const;

  // int_{Omega*} exp(-2 pi i xi.x) dx for real xi; at integer xi this is the
  // Fourier coefficient of the indicator on the torus.
  Complex fourier_transform(std::span<const double> xi) const;
  Complex fourier_coefficient(std::span<const int> k) const;

  std::string membership_convention() const;
  std::string describe() const;
  nlohmann::json to_json() const;
  static TorusSet from_json(const nlohmann::json& j);

 private:
  int d_ = 0;
  std::variant<Box, Ball, Polygon> shape_;
  std::vector<double> anchor_;

  // Image of x nearest to the anchor, coordinate-wise.
  std::vector<double> nearest_image(std::span<const double> x) const;
};

// --- polygon machinery (d = 2)

// Exact Fourier transform by repeated use of the divergence identity
// int_F e^{-2 pi i xi.x} = sum_{facets G} (i n_G . P_F xi)/(2 pi |P_F xi|^2) int_G ...
// down to vertices. When 2 pi |P_F xi| < 1/diameter the face integral is done
// by Gauss-Legendre quadrature instead.
Complex polygon_fourier_transform(const Polygon& poly, std::span<const double> xi);

// 2 sum over face chains (polygon, edge) of prod min(lambda, 1/(2 pi |P xi|)).
double polytope_ft_bound(const Polygon& poly, std::span<const double> xi);

double polygon_area(const Polygon& poly);
double polygon_diameter(const Polygon& poly);

}  // namespace dforge
