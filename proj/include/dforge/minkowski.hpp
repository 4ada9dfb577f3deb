#pragma once

#include <cstdint>
#include <vector>

#include "dforge/torus_set.hpp"

namespace dforge {

struct ShellMeasure {
  double value = 0.0;
  double standard_error = 0.0;  // zero for closed forms
};

// t -> mu{x : dist(x, dOmega) < t}. Closed forms for boxes (d = 1, 2) and
// balls (d = 2); Monte Carlo on `samples` uniform points otherwise.
class ShellProfile {
 public:
  explicit ShellProfile(const TorusSet& set, std::size_t samples = 1000000,
                        std::uint64_t seed = 20240601);

  ShellMeasure operator()(double t) const;
  bool exact() const { return exact_; }
  std::size_t samples() const { return distances_.size(); }

 private:
  TorusSet set_;
  bool exact_ = false;
  std::vector<double> distances_;  // sorted Monte Carlo distances
};

// 200 log-spaced points on [1e-4, 1].
std::vector<double> minkowski_t_grid(int points = 200, double lo = 1e-4, double hi = 1.0);

struct MinkowskiContent {
  double value = 0.0;  // sup_t t^{-alpha} mu{dist < t} over the grid
  double t_at_sup = 0.0;
  bool boundary_attained = false;  // sup sits at the first or last grid point
  double standard_error = 0.0;
  bool exact = false;
};

MinkowskiContent minkowski_content(const ShellProfile& shell, double alpha,
                                   const std::vector<double>& t_grid = minkowski_t_grid());
MinkowskiContent minkowski_content(const TorusSet& set, double alpha,
                                   const std::vector<double>& t_grid = minkowski_t_grid());

}  // namespace dforge
