#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "dforge/interp.hpp"

namespace dforge {

// Surface measure of the unit sphere S^{d-1} (2, 2pi, 4pi).
double sphere_surface(int d);

// Angular average of exp(i z u.e) over u in S^{d-1}: cos z, J0(z), sin z / z.
double radial_plane_wave(int d, double z);

struct KernelConfig {
  int dimension = 2;
  double bump_grid_step = 1.0 / 256;
  double khat_step = 1.0 / 4096;
  double table_step = 1.0 / 64;
  double x_max = 24.0;
  double t_max = 24.0;
  int hankel_panels = 64;
  double quadrature_tolerance = 1e-8;
  double refinement_tolerance = 1e-6;

  void validate() const;
};

void to_json(nlohmann::json& j, const KernelConfig& c);
void from_json(const nlohmann::json& j, KernelConfig& c);

// Normalized radial bump m(r) = c_d exp(-1/(1/4 - r^2)) for r < 1/2, zero
// outside, with the L2 norm over R^d equal to one.
class BumpProfile {
 public:
  static BumpProfile build(int d, double grid_step, double rel_tol = 1e-10);

  int dimension() const { return d_; }
  double normalization() const { return c_; }
  double support_radius() const { return 0.5; }
  double grid_step() const { return step_; }
  const std::vector<double>& samples() const { return samples_; }

  double operator()(double r) const;
  // Integral of m^2 over R^d, recomputed by radial quadrature.
  double l2_norm_squared(double rel_tol = 1e-12) const;

 private:
  int d_ = 0;
  double c_ = 0.0;
  double step_ = 0.0;
  std::vector<double> samples_;
};

// (m*m)(s) for a single radius s in [0, 1]; zero for s >= 1.
double autocorrelation_at(const BumpProfile& bump, double s, double rel_tol = 1e-10);

// Radial table of m*m on [0, 1].
struct RadialTable {
  double step = 0.0;
  std::vector<double> values;
  MonotoneCubic interp;

  RadialTable() = default;
  RadialTable(double step, std::vector<double> values);
  double operator()(double r) const;
  double back() const { return step * static_cast<double>(values.size() - 1); }
};

RadialTable autocorrelate(const BumpProfile& bump, double step, double rel_tol = 1e-10);

// Tabulated kernel with K-hat = (1+|xi|^2)^{-(d+1)/2} (m*m)(xi), its radial
// inverse transform K, the tail mass I(t) = int_{|x|>=t} K and
// gamma = (e^{-2 pi} int_{|y|<=1} K)^{-1}.
class KernelTable {
 public:
  static KernelTable build(const KernelConfig& config);
  static KernelTable build(const BumpProfile& bump, const KernelConfig& config);

  int dimension() const { return config_.dimension; }
  const KernelConfig& config() const { return config_; }

  double khat(double rho) const;
  double k(double x) const;
  double tail(double t) const;
  double gamma() const { return gamma_; }
  double psi(double t) const;

  double tail_constant() const { return tail_constant_; }
  double tail_remainder() const { return tail_remainder_; }
  double khat_interp_error() const { return khat_interp_error_; }
  double min_k() const;
  // Radial trapezoid of K over [0, x_max] with the leading Euler-Maclaurin
  // end correction, plus the analytic remainder.
  double mean_trapezoid() const;
  // Forward radial transform of the K table at frequency rho.
  double khat_from_table(double rho) const;

  const RadialTable& khat_table() const { return khat_; }
  const RadialTable& k_table() const { return k_; }
  const RadialTable& tail_table() const { return tail_; }

  nlohmann::json to_json() const;
  static KernelTable from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static KernelTable load(const std::string& path);

 private:
  KernelConfig config_;
  double bump_normalization_ = 0.0;
  RadialTable khat_;
  RadialTable k_;
  RadialTable tail_;
  double gamma_ = 0.0;
  double tail_constant_ = 0.0;
  double tail_remainder_ = 0.0;
  double khat_interp_error_ = 0.0;

  void check_claims() const;
};

// Fitted c(alpha) = sup_t psi(t) (1+t)^alpha over the tabulated range.
double decay_constant(const KernelTable& kernel, double alpha);

// Loads the kernel from `path` when it exists and matches `config`, otherwise
// builds and writes it.
KernelTable load_or_build_kernel(const KernelConfig& config, const std::string& path);

}  // namespace dforge
