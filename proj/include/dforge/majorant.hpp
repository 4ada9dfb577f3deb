#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dforge/frequencies.hpp"
#include "dforge/h_coefficients.hpp"
#include "dforge/kernel.hpp"
#include "dforge/torus_set.hpp"

namespace dforge {

// Real trigonometric polynomial sum_{|k|<R} c_k exp(2 pi i k.x) on T^d.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(int d, double R, std::vector<Complex> coefficients);  // indexed like FrequencySet(d, R, true)

  int dimension() const { return freqs_.dimension(); }
  double degree() const { return freqs_.radius(); }
  const FrequencySet& frequencies() const { return freqs_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  Complex coefficient(std::span<const int> k) const;  // zero outside |k| < R

  // Direct summation, real part.
  double evaluate(std::span<const double> x) const;
  // Values on the n^d grid x = j/n (row-major) by inverse FFT; n > 2R.
  std::vector<double> synthesize(int n) const;
  // max |c_k - conj(c_{-k})|
  double hermitian_defect() const;

  nlohmann::json to_json() const;

 private:
  FrequencySet freqs_;
  std::vector<Complex> coeffs_;
};

struct MajorantPair {
  TrigPolynomial A;  // minorant
  TrigPolynomial B;  // majorant
  double R = 0.0;
  // Sup-norm error budget for A and B from the coefficient errors:
  // sum |K-hat| dH + dK-hat sum (|chi-hat| + |H|) + synthesis roundoff.
  double budget = 0.0;
  double h_error_term = 0.0;
  double khat_error_term = 0.0;
  double h_grid_points = 0.0;
};

// A, B = sum_{|k|<R} K-hat(k/R) (chi-hat(k) -/+ H_R-hat(k)) e^{2 pi i k.x}.
MajorantPair majorant_pair(const TorusSet& set, const KernelTable& kernel, double R);
MajorantPair majorant_pair(const TorusSet& set, const KernelTable& kernel, const HCoefficients& h);

struct ViolationStat {
  double max_violation = 0.0;  // max over grid of the positive part
  double fraction = 0.0;       // fraction of grid points with a positive violation
};

struct SandwichReport {
  double R = 0.0;
  int grid_n = 0;
  double budget = 0.0;
  ViolationStat minorant;     // A <= chi
  ViolationStat majorant;     // chi <= B
  ViolationStat width;        // B - A <= psi(R dist)
  double far_field_max_width = 0.0;  // max B - A where dist >= 8/R
  double far_field_psi = 0.0;        // psi(8)
  double max_width_ratio = 0.0;      // max (B - A)/psi(R dist) near the boundary, reported only
  double a_mean = 0.0, b_mean = 0.0, measure = 0.0;
  bool within_budget() const;
  nlohmann::json to_json() const;
};

// Evaluates A and B on the grid_n^d grid (d = 2 for CSV output). When
// csv_path is non-empty writes x1,x2,chi,A,B,psi_bound rows.
SandwichReport sandwich_report(const MajorantPair& pair, const TorusSet& set, const KernelTable& kernel,
                               int grid_n, const std::string& csv_path = "");

// Spot check of |chi - K_R * chi|(x) <= I(R dist(x)) at random points; returns
// the largest excess of the left side over the right side (<= 0 when it holds).
double smoothing_claim_excess(const TorusSet& set, const KernelTable& kernel, double R, int samples,
                              std::uint64_t seed);

}  // namespace dforge
