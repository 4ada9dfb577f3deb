#pragma once

#include <span>
#include <string>
#include <vector>

#include "dforge/frequencies.hpp"
#include "dforge/torus_set.hpp"

namespace dforge {

// sqrt(2) - 1 and sqrt(3) - 1, rounded once from 30-digit literals.
inline constexpr long double kSqrt2Minus1 = 0.414213562373095048801688724210L;
inline constexpr long double kSqrt3Minus1 = 0.732050807568877293527446341506L;

bool is_prime(long n);

// Finite point multiset in [0,1)^d together with the rule that generated it.
class PointSet {
 public:
  enum class Kind { Lattice, Kronecker, Korobov, Explicit };

  // m^{-1/d} Z^d restricted to the torus; m must be a perfect d-th power.
  static PointSet lattice(int d, long m);
  // {j x mod 1}, j = 1..m.
  static PointSet kronecker(std::vector<double> x, long m);
  // {j g / m mod 1}, j = 1..m, m prime, 1 <= g_i <= m-1.
  static PointSet korobov(std::vector<long> g, long m);
  // Row-major coordinates; reduced into [0,1).
  static PointSet explicit_points(int d, std::vector<double> coords);

  // "lattice:m=1024", "korobov:m=101,g=1;27", "kronecker:m=4096,x=sqrt2-1;sqrt3-1",
  // "csv:path". `d` is needed only for lattices.
  static PointSet from_descriptor(const std::string& descriptor, int d);
  static PointSet read_csv(const std::string& path);
  void write_csv(const std::string& path) const;

  Kind kind() const { return kind_; }
  int dimension() const { return d_; }
  long size() const { return m_; }
  std::span<const double> operator[](long j) const {
    return {coords_.data() + j * d_, static_cast<std::size_t>(d_)};
  }
  const std::vector<double>& coordinates() const { return coords_; }
  const std::vector<long>& generator() const { return g_; }
  const std::vector<double>& direction() const { return x_; }
  long lattice_side() const { return side_; }
  std::string descriptor() const;

  // m^{-1} sum_j exp(2 pi i k.x_j). Lattice and Korobov sets use the
  // congruence characterization (exactly 0 or 1), Kronecker sets the
  // geometric-series closed form, explicit sets pairwise summation.
  Complex weyl_sum(std::span<const int> k) const;
  double weyl_abs(std::span<const int> k) const { return std::abs(weyl_sum(k)); }

 private:
  Kind kind_ = Kind::Explicit;
  int d_ = 0;
  long m_ = 0;
  long side_ = 0;
  std::vector<long> g_;
  std::vector<double> x_;
  std::vector<double> coords_;
};

// Psi(k) = |m^{-1} sum_j exp(2 pi i k.x_j)| for 0 < |k| < R.
class WeylSpectrum {
 public:
  WeylSpectrum(const PointSet& points, double R);

  double R() const { return freqs_.radius(); }
  const FrequencySet& frequencies() const { return freqs_; }
  std::size_t size() const { return values_.size(); }
  double value(std::size_t i) const { return values_[i]; }
  double operator()(std::span<const int> k) const;

 private:
  FrequencySet freqs_;
  std::vector<double> values_;
};

long count_inside(const PointSet& points, const TorusSet& set);
// |mu(Omega) - (points inside)/m| under the set's membership convention.
double true_discrepancy(const PointSet& points, const TorusSet& set);

// sum_{0<|k|<R} |k|^{-d} ||k.x||^{-1}; NumericalError on a resonance
// ||k.x|| < 1e-12.
double schmidt_sum(std::span<const double> x, double R);

// Pairwise summation in a fixed order.
double pairwise_sum(std::span<const double> v);

}  // namespace dforge
