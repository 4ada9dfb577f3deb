#include "dforge/h_coefficients.hpp"

#include <cmath>

#include "dforge/error.hpp"
#include "dforge/fft.hpp"
#include "dforge/minkowski.hpp"
#include "dforge/quadrature.hpp"

namespace dforge {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

int HCoefficients::default_min_points(int d) {
  int n = 1;
  while (ipow(4 * static_cast<std::size_t>(n), d) <= kMaxHGridPoints) n *= 2;
  return n;
}

int HCoefficients::grid_points_for(int d, double R, int min_points) {
  if (min_points <= 0) min_points = default_min_points(d);
  const double want = std::max(8.0 * R, static_cast<double>(min_points));
  int n = 1;
  while (n < want) n *= 2;
  return n;
}

bool HCoefficients::feasible(int d, double R, int min_points) {
  return ipow(2 * static_cast<std::size_t>(grid_points_for(d, R, min_points)), d) <= kMaxHGridPoints;
}

HCoefficients::HCoefficients(const TorusSet& set, const KernelTable& kernel, double R, int min_points,
                             double k_radius)
    : d_(set.dimension()), R_(R) {
  if (!(R > 0.0)) throw ConfigError("H_R needs R > 0");
  if (kernel.dimension() != d_) throw ConfigError("kernel and set dimensions differ");
  n_ = grid_points_for(d_, R, min_points);
  if (!feasible(d_, R, min_points))
    throw ConfigError("H_R grid for R = " + std::to_string(R) + " exceeds the grid size cap");

  const int fine = 2 * n_;
  const std::size_t total = ipow(fine, d_);
  std::vector<Complex> grid(total);
  std::vector<double> x(d_);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (int j = d_ - 1; j >= 0; --j) {
      x[j] = static_cast<double>(r % fine) / fine;
      r /= fine;
    }
    grid[idx] = kernel.gamma() * kernel.tail(R * set.boundary_distance(x));
  }
  // The coarse grid is every other node of the fine one.
  std::vector<Complex> coarse(ipow(n_, d_));
  for (std::size_t idx = 0; idx < coarse.size(); ++idx) {
    std::size_t r = idx, f = 0, stride = 1;
    for (int j = d_ - 1; j >= 0; --j) {
      f += 2 * (r % n_) * stride;
      r /= n_;
      stride *= fine;
    }
    coarse[idx] = grid[f];
  }
  const auto hat_fine = fft_grid(grid, d_, fine, FftSign::Forward);
  const auto hat_coarse = fft_grid(coarse, d_, n_, FftSign::Forward);
  const double norm_fine = 1.0 / static_cast<double>(total);
  const double norm_coarse = 1.0 / static_cast<double>(coarse.size());

  const double keep = std::max(R, k_radius);
  if (2.0 * keep >= n_) throw NumericalError("H_R resolution insufficient for the requested frequency range");
  freqs_ = FrequencySet(d_, keep, true, FrequencySet::Bound::Closed);
  values_.resize(freqs_.size());
  errors_.resize(freqs_.size());
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    const auto k = freqs_[i];
    const Complex a = hat_fine[fft_index(k.data(), d_, fine)] * norm_fine;
    const Complex b = hat_coarse[fft_index(k.data(), d_, n_)] * norm_coarse;
    values_[i] = a;
    errors_[i] = std::abs(a - b);
    max_error_ = std::max(max_error_, errors_[i]);
  }
}

std::size_t HCoefficients::locate(std::span<const int> k) const {
  const std::size_t i = freqs_.find(k);
  if (i == freqs_.size()) {
    for (int c : k)
      if (2 * std::abs(c) >= n_)
        throw NumericalError("H_R resolution insufficient: frequency at or beyond grid Nyquist");
    throw ConfigError("H_R coefficient requested outside the stored frequency range");
  }
  return i;
}

Complex HCoefficients::operator()(std::span<const int> k) const { return values_[locate(k)]; }

double HCoefficients::error(std::span<const int> k) const { return errors_[locate(k)]; }

double h_zero_coarea(const TorusSet& set, const KernelTable& kernel, double R) {
  const ShellProfile shell(set);
  if (!shell.exact()) throw ConfigError("coarea cross-check needs a closed-form shell measure");
  const int d = set.dimension();
  const double omega = sphere_surface(d);
  // Beyond t_end every point is within t_end of the boundary (t_end >= half the torus diagonal).
  const double t_end = 0.5 * std::sqrt(static_cast<double>(d));
  auto f = [&](double t) {
    const double s = R * t;
    return shell(t).value * R * omega * kernel.k(s) * std::pow(s, d - 1);
  };
  // Split at the kinks of the shell measure and resolve the kernel scale 1/R.
  const int pieces = std::max(64, static_cast<int>(std::ceil(16.0 * R * t_end)));
  double s = 0.0;
  for (int i = 0; i < pieces; ++i)
    s += integrate_adaptive(f, t_end * i / pieces, t_end * (i + 1) / pieces, 1e-10, 1e-14, "coarea");
  return kernel.gamma() * (s + kernel.tail(R * t_end));
}

FConstant f_constant(const TorusSet& set, const KernelTable& kernel, double alpha, double beta,
                     int k_max, const std::vector<double>& R_grid) {
  if (!(alpha >= 0.0 && alpha <= 0.5 * (set.dimension() + 1)))
    throw ConfigError("alpha must lie in [0, (d+1)/2]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  FConstant c;
  for_each_frequency(set.dimension(), k_max, false, FrequencySet::Bound::Closed, [&](std::span<const int> k) {
    double n2 = 0.0;
    for (int v : k) n2 += double(v) * v;
    c.c_chi = std::max(c.c_chi, std::abs(set.fourier_coefficient(k)) * std::pow(n2, 0.5 * alpha));
  });
  for (double R : R_grid) {
    // psi(R dist) = 4 H_{R/2}
    const HCoefficients h(set, kernel, 0.5 * R, 256, std::min<double>(R, k_max));
    const std::vector<int> zero(set.dimension(), 0);
    c.c_psi = std::max(c.c_psi, 4.0 * std::abs(h(zero)) * std::pow(R, beta));
    for_each_frequency(set.dimension(), std::min<double>(R, k_max), false,
                       FrequencySet::Bound::Closed, [&](std::span<const int> k) {
                         double n2 = 0.0;
                         for (int v : k) n2 += double(v) * v;
                         if (n2 >= R * R) return;
                         c.c_psi = std::max(c.c_psi, 4.0 * std::abs(h(k)) * std::pow(n2, 0.5 * alpha));
                       });
  }
  c.value = std::max(c.c_chi, c.c_psi);
  return c;
}

}  // namespace dforge
