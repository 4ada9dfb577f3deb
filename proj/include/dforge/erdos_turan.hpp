#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dforge/chains.hpp"
#include "dforge/h_coefficients.hpp"
#include "dforge/kernel.hpp"
#include "dforge/pointsets.hpp"
#include "dforge/torus_set.hpp"

namespace dforge {

struct DiscrepancyReport {
  nlohmann::json set;
  std::string points;
  long m = 0;
  double R = 0.0;
  double bound = 0.0;
  double h0_term = 0.0;   // |H_R-hat(0)|
  double sum_term = 0.0;  // sum_{0<|k|<R} (|chi-hat| + |H-hat|) Psi
  double uncertainty = 0.0;
  int contributing_frequencies = 0;  // Psi(k) != 0
  std::optional<double> true_discrepancy;
  std::optional<double> alpha, beta, delta;

  bool valid() const { return !true_discrepancy || bound + uncertainty >= *true_discrepancy; }
  nlohmann::json to_json() const;
};

// |H_R-hat(0)| + sum_{0<|k|<R} (|chi-hat(k)| + |H_R-hat(k)|) Psi(k), with the
// true discrepancy attached. The uncertainty collects the H_R quadrature error.
DiscrepancyReport et_bound(const TorusSet& set, const PointSet& points, const KernelTable& kernel, double R);
DiscrepancyReport et_bound(const TorusSet& set, const PointSet& points, const HCoefficients& h);

enum class RRule { Lattice, Kronecker };

RRule parse_rule(const std::string& name);

// Lattice: m^{1/(d+beta-alpha)}.
// Kronecker: m^{1/(d+beta-alpha)} log(m)^{-(d+1+eps)/(d+beta-alpha)}.
double optimal_R(RRule rule, double m, int d, double alpha, double beta, double eps = 0.1);

struct RSearch {
  double R_formula = 0.0;
  DiscrepancyReport at_formula;
  DiscrepancyReport best;
  std::vector<std::pair<double, double>> trace;  // (R, bound)
};

// Minimizes the bound over R in {2^2, ..., 2^12} (those whose H_R grid fits)
// together with the formula R.
RSearch search_R(const TorusSet& set, const PointSet& points, const KernelTable& kernel, RRule rule,
                 double alpha, double beta, double eps = 0.1);

// R^{-1} + sum_{0<|k|<R} Phi(k) Psi(k).
double polytope_family_bound(const ChainSystem& chains, const WeylSpectrum& spectrum, double R);
double polytope_family_bound(const ChainSystem& chains, const PointSet& points, double R);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dforge
