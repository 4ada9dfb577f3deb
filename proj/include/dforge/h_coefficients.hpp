#pragma once

#include <span>

#include "dforge/frequencies.hpp"
#include "dforge/kernel.hpp"
#include "dforge/torus_set.hpp"

namespace dforge {

// Largest total number of points allowed on the refined H grid.
inline constexpr std::size_t kMaxHGridPoints = std::size_t{1} << 22;

// Fourier coefficients of H_R(x) = psi(2R dist(x, dOmega))/4 = gamma I(R dist)
// on the torus, by rectangle-rule quadrature on an N^d grid (N the smallest
// power of two >= max(8R, min_points)) and on the refined 2N grid. The
// default min_points is the largest power of two keeping (2N)^d within the cap.
// Values are taken from the refined grid; error(k) is the change under refinement.
class HCoefficients {
 public:
  // Coefficients are kept for |k| <= max(R, k_radius).
  HCoefficients(const TorusSet& set, const KernelTable& kernel, double R, int min_points = 0,
                double k_radius = 0.0);

  // Grid size that would be used for this R, without building anything.
  static int default_min_points(int d);
  static int grid_points_for(int d, double R, int min_points = 0);
  static bool feasible(int d, double R, int min_points = 0);

  double R() const { return R_; }
  int grid_points() const { return n_; }
  Complex operator()(std::span<const int> k) const;
  double error(std::span<const int> k) const;
  double max_error() const { return max_error_; }  // over the stored range

 private:
  int d_ = 0;
  double R_ = 0.0;
  int n_ = 0;
  FrequencySet freqs_;
  std::vector<Complex> values_;
  std::vector<double> errors_;
  double max_error_ = 0.0;

  std::size_t locate(std::span<const int> k) const;
};

// k = 0 coefficient of H_R for a set with an exact shell profile, by the
// coarea route: gamma int_0^inf mu{dist < t} (-d/dt) I(R t) dt.
double h_zero_coarea(const TorusSet& set, const KernelTable& kernel, double R);

struct FConstant {
  double c_chi = 0.0;  // max |chi-hat(k)| |k|^alpha, 0 < |k| <= k_max
  double c_psi = 0.0;  // psi(R dist) coefficients against R^{-beta} and |k|^{-alpha}
  double value = 0.0;  // max of the two
};

// Empirical lower bound for the smallest constant c with |chi-hat(k)| <= c|k|^{-alpha}
// and |FT[psi(R dist)](k)| <= c|k|^{-alpha} (0<|k|<R), <= c R^{-beta} (k = 0),
// over |k| <= k_max and R in R_grid.
FConstant f_constant(const TorusSet& set, const KernelTable& kernel, double alpha, double beta,
                     int k_max, const std::vector<double>& R_grid);

}  // namespace dforge
