#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>
#include <complex>

#include "dforge/error.hpp"
#include "dforge/sphere.hpp"

namespace dforge {

std::array<double, 3> euler_zyz(const Eigen::Matrix3d& R) {
  const double sb = std::hypot(R(0, 2), R(1, 2));
  const double beta = std::atan2(sb, R(2, 2));
  if (sb > 1e-12) return {std::atan2(R(1, 2), R(0, 2)), beta, std::atan2(R(2, 1), -R(2, 0))};
  // Gimbal lock: only alpha + gamma (beta = 0) or alpha - gamma (beta = pi) is defined.
  if (R(2, 2) > 0.0) return {std::atan2(R(1, 0), R(0, 0)), 0.0, 0.0};
  return {std::atan2(-R(1, 0), -R(0, 0)), beta, 0.0};
}

Eigen::MatrixXd wigner_small_d(int l, double beta) {
  const int n = 2 * l + 1;
  Eigen::MatrixXd d(n, n);
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta), x = std::cos(beta);
  for (int mp = -l; mp <= l; ++mp) {
    for (int m = -l; m <= l; ++m) {
      // Jacobi-polynomial form, branch chosen by the smallest of l+-m, l+-m'.
      const int k = std::min({l + m, l - m, l + mp, l - mp});
      int a, lambda;
      if (k == l + m) {
        a = mp - m;
        lambda = mp - m;
      } else if (k == l - m) {
        a = m - mp;
        lambda = 0;
      } else if (k == l + mp) {
        a = m - mp;
        lambda = 0;
      } else {
        a = mp - m;
        lambda = mp - m;
      }
      const int b = 2 * l - 2 * k - a;
      // sqrt( C(2l-k, k+a) / C(k+b, b) )
      const double log_ratio = std::lgamma(2 * l - k + 1.0) - std::lgamma(k + a + 1.0) - std::lgamma(2 * l - 2 * k - a + 1.0) -
                               (std::lgamma(k + b + 1.0) - std::lgamma(b + 1.0) - std::lgamma(k + 1.0));
      const double pref = std::exp(0.5 * log_ratio) * std::pow(s, a) * std::pow(c, b);
      const double p = boost::math::jacobi(static_cast<unsigned>(k), static_cast<double>(a), static_cast<double>(b), x);
      d(mp + l, m + l) = ((lambda % 2 == 0) ? 1.0 : -1.0) * pref * p;
    }
  }
  return d;
}

Eigen::MatrixXcd wigner_D(int l, const Eigen::Matrix3d& R) {
  if (l < 0) throw ConfigError("harmonic degree must be nonnegative");
  const auto [alpha, beta, gamma] = euler_zyz(R);
  const Eigen::MatrixXd d = wigner_small_d(l, beta);
  const int n = 2 * l + 1;
  Eigen::MatrixXcd D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      D(i, j) = std::polar(1.0, -(i - l) * alpha) * d(i, j) * std::polar(1.0, -(j - l) * gamma);
  return D;
}

}  // namespace dforge
