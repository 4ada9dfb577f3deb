#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace dforge {

// 3x3 integer numerators; the rational matrix is numer / 5^length.
using IntMatrix3 = std::array<std::array<long long, 3>, 3>;

// Letters 0..5 are a, a^-1, b, b^-1, c, c^-1: rotations by arccos(-3/5)
// (sine +4/5) about z, x and y. Letter i ^ 1 is the inverse of letter i.
std::array<IntMatrix3, 6> lps_generators();
char letter_name(int letter);

struct RotationWord {
  std::vector<int> letters;
  IntMatrix3 numer{};
  int length = 0;
  Eigen::Matrix3d matrix() const;
};

// (3 * 5^k - 1) / 2
long long word_count(int k);

// All reduced words of length <= k, depth first with last-letter exclusion;
// the identity comes first.
std::vector<RotationWord> enumerate_words(int k);

// Exact test that the rational matrices of all words are pairwise distinct.
bool all_distinct(const std::vector<RotationWord>& words);

// Wigner rotation matrix D^l(R), rows and columns indexed m = -l..l, from
// the z-y-z Euler angles of R and the closed-form small-d matrix.
Eigen::MatrixXcd wigner_D(int l, const Eigen::Matrix3d& R);
// Small-d matrix d^l(beta).
Eigen::MatrixXd wigner_small_d(int l, double beta);
// z-y-z Euler angles (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma).
std::array<double, 3> euler_zyz(const Eigen::Matrix3d& R);

struct HarmonicBlock {
  int l = 0;
  Eigen::MatrixXcd T;
  double norm = 0.0;
  double hermitian_defect = 0.0;
};

// T = m^{-1} sum_j D^l(sigma_j) and its spectral norm.
HarmonicBlock hecke_block(const std::vector<RotationWord>& words, int l);

struct RhoHat {
  double value = 0.0;
  int argmax_l = 0;
  std::vector<double> norms;  // index l = 1..L at position l-1
};

// max_{1<=l<=L} ||T_l||: a lower bound for the nontrivial spectral radius.
RhoHat rho_hat(const std::vector<RotationWord>& words, int L);

struct Cap {
  Eigen::Vector3d pole;
  double theta = 0.0;  // angular radius in (0, pi]
  double measure() const { return 0.5 * (1.0 - std::cos(theta)); }
  bool contains(const Eigen::Vector3d& y) const;
  // mu{y : angular distance to the cap boundary < t}
  double shell(double t) const;
};

// Disjoint union of caps.
struct CapRegion {
  std::vector<Cap> caps;
  explicit CapRegion(std::vector<Cap> c);
  double measure() const;
  bool contains(const Eigen::Vector3d& y) const;
  double shell(double t) const;
  nlohmann::json to_json() const;
};

struct SphereOrbit {
  Eigen::Vector3d base;
  int k = 0;
  std::vector<Eigen::Vector3d> points;
  long m() const { return static_cast<long>(points.size()); }
};

SphereOrbit orbit(const Eigen::Vector3d& x, const std::vector<RotationWord>& words, int k);
double set_discrepancy(const SphereOrbit& orbit, const CapRegion& region);

// sup over a log grid of t in (0, pi] of t^{-delta} mu{dist < t}.
double sphere_minkowski(const CapRegion& region, double delta);

struct SphereBound {
  double M = 0.0;
  double grid_min = 0.0;
  double grid_R = 0.0;
  double formula_R = 0.0;
  double formula_value = 0.0;
  nlohmann::json to_json() const;
};

// M(delta) (R^{-delta} + R^{(2-delta)/2} rho) minimized over R = 2^{j/8},
// 1 <= R <= 2^12 (and the formula R), and evaluated at R = m^{1/(2+delta)} log(m)^{-2/(2+delta)}.
SphereBound sphere_bound(long m, const CapRegion& region, double delta, double rho);

}  // namespace dforge
