#include "dforge/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "dforge/error.hpp"

namespace dforge {

namespace {

IntMatrix3 multiply(const IntMatrix3& a, const IntMatrix3& b) {
  IntMatrix3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

IntMatrix3 transpose(const IntMatrix3& a) {
  IntMatrix3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

long long pow5(int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= 5;
  return r;
}

}  // namespace

std::array<IntMatrix3, 6> lps_generators() {
  const IntMatrix3 a{{{-3, -4, 0}, {4, -3, 0}, {0, 0, 5}}};
  const IntMatrix3 b{{{5, 0, 0}, {0, -3, -4}, {0, 4, -3}}};
  const IntMatrix3 c{{{-3, 0, 4}, {0, 5, 0}, {-4, 0, -3}}};
  return {a, transpose(a), b, transpose(b), c, transpose(c)};
}

char letter_name(int letter) {
  static const char names[] = {'a', 'A', 'b', 'B', 'c', 'C'};
  return names[letter];
}

Eigen::Matrix3d RotationWord::matrix() const {
  const double scale = 1.0 / static_cast<double>(pow5(length));
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = static_cast<double>(numer[i][j]) * scale;
  return m;
}

long long word_count(int k) { return (3 * pow5(k) - 1) / 2; }

std::vector<RotationWord> enumerate_words(int k) {
  if (k < 0 || k > 8) throw ConfigError("word length must lie in [0, 8]");
  const auto gens = lps_generators();
  std::vector<RotationWord> out;
  out.reserve(static_cast<std::size_t>(word_count(k)));
  RotationWord id;
  id.numer = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::vector<RotationWord> stack{id};
  while (!stack.empty()) {
    RotationWord w = std::move(stack.back());
    stack.pop_back();
    if (w.length < k) {
      for (int l = 5; l >= 0; --l) {
        if (!w.letters.empty() && (w.letters.back() ^ 1) == l) continue;
        RotationWord c;
        c.letters = w.letters;
        c.letters.push_back(l);
        c.length = w.length + 1;
        c.numer = multiply(w.numer, gens[l]);
        stack.push_back(std::move(c));
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

bool all_distinct(const std::vector<RotationWord>& words) {
  // Reduce numer / 5^len to lowest terms, then compare exactly.
  std::set<std::pair<int, std::array<long long, 9>>> seen;
  for (const auto& w : words) {
    std::array<long long, 9> e{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e[3 * i + j] = w.numer[i][j];
    int len = w.length;
    while (len > 0 && std::all_of(e.begin(), e.end(), [](long long v) { return v % 5 == 0; })) {
      for (auto& v : e) v /= 5;
      --len;
    }
    if (!seen.emplace(len, e).second) return false;
  }
  return true;
}

HarmonicBlock hecke_block(const std::vector<RotationWord>& words, int l) {
  if (l < 0 || l > 50) throw ConfigError("harmonic degree must lie in [0, 50]");
  if (words.empty()) throw ConfigError("no words to average");
  const int n = 2 * l + 1;
  HarmonicBlock h;
  h.l = l;
  h.T = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& w : words) {
    const Eigen::MatrixXcd D = wigner_D(l, w.matrix());
    const double unitarity = (D * D.adjoint() - I).cwiseAbs().maxCoeff();
    if (unitarity > 1e-8)
      throw NumericalError("rotation representation of degree " + std::to_string(l) +
                           " fails unitarity (defect " + std::to_string(unitarity) + ")");
    h.T += D;
  }
  h.T /= static_cast<double>(words.size());
  h.hermitian_defect = (h.T - h.T.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd H = 0.5 * (h.T + h.T.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  h.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return h;
}

RhoHat rho_hat(const std::vector<RotationWord>& words, int L) {
  if (L < 1) throw ConfigError("rho_hat needs L >= 1");
  RhoHat r;
  for (int l = 1; l <= L; ++l) {
    const HarmonicBlock h = hecke_block(words, l);
    if (h.hermitian_defect > 1e-10)
      throw NumericalError("averaging operator is not self-adjoint at degree " + std::to_string(l));
    r.norms.push_back(h.norm);
    if (h.norm > r.value) {
      r.value = h.norm;
      r.argmax_l = l;
    }
  }
  return r;
}

bool Cap::contains(const Eigen::Vector3d& y) const {
  return pole.dot(y) >= std::cos(theta) - 1e-12;
}

double Cap::shell(double t) const {
  if (t <= 0.0) return 0.0;
  return 0.5 * (std::cos(std::max(theta - t, 0.0)) - std::cos(std::min(theta + t, std::numbers::pi)));
}

CapRegion::CapRegion(std::vector<Cap> c) : caps(std::move(c)) {
  if (caps.empty()) throw ConfigError("cap region is empty");
  for (auto& cap : caps) {
    const double n = cap.pole.norm();
    if (!(n > 0.0)) throw ConfigError("cap pole must be nonzero");
    cap.pole /= n;
    if (!(cap.theta > 0.0 && cap.theta <= std::numbers::pi)) throw ConfigError("cap angle must lie in (0, pi]");
  }
  for (std::size_t i = 0; i < caps.size(); ++i)
    for (std::size_t j = i + 1; j < caps.size(); ++j) {
      const double angle = std::acos(std::clamp(caps[i].pole.dot(caps[j].pole), -1.0, 1.0));
      if (!(angle > caps[i].theta + caps[j].theta)) throw ConfigError("caps in a region must be disjoint");
    }
}

double CapRegion::measure() const {
  double s = 0.0;
  for (const auto& c : caps) s += c.measure();
  return s;
}

bool CapRegion::contains(const Eigen::Vector3d& y) const {
  return std::any_of(caps.begin(), caps.end(), [&](const Cap& c) { return c.contains(y); });
}

double CapRegion::shell(double t) const {
  double s = 0.0;
  for (const auto& c : caps) s += c.shell(t);
  return std::min(s, 1.0);
}

nlohmann::json CapRegion::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : caps)
    j.push_back({{"pole", {c.pole.x(), c.pole.y(), c.pole.z()}}, {"theta", c.theta}});
  return j;
}

SphereOrbit orbit(const Eigen::Vector3d& x, const std::vector<RotationWord>& words, int k) {
  const double n = x.norm();
  if (std::abs(n - 1.0) > 1e-9) throw ConfigError("orbit base point must be a unit vector");
  SphereOrbit o;
  o.base = x / n;
  o.k = k;
  o.points.reserve(words.size());
  for (const auto& w : words) o.points.push_back(w.matrix() * o.base);
  return o;
}

double set_discrepancy(const SphereOrbit& orbit, const CapRegion& region) {
  long inside = 0;
  for (const auto& p : orbit.points) inside += region.contains(p) ? 1 : 0;
  return std::abs(region.measure() - static_cast<double>(inside) / static_cast<double>(orbit.m()));
}

double sphere_minkowski(const CapRegion& region, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  const int points = 200;
  const double lo = 1e-4, hi = std::numbers::pi;
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = lo * std::exp(std::log(hi / lo) * i / (points - 1));
    best = std::max(best, std::pow(t, -delta) * region.shell(t));
  }
  return best;
}

nlohmann::json SphereBound::to_json() const {
  return {{"M", M}, {"grid_min", grid_min}, {"grid_R", grid_R}, {"formula_R", formula_R}, {"formula_value", formula_value}};
}

SphereBound sphere_bound(long m, const CapRegion& region, double delta, double rho) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in (0, 1]");
  if (m < 2) throw ConfigError("sphere bound needs m >= 2");
  SphereBound b;
  b.M = sphere_minkowski(region, delta);
  auto value = [&](double R) { return b.M * (std::pow(R, -delta) + std::pow(R, 0.5 * (2.0 - delta)) * rho); };
  b.grid_min = 1e300;
  for (int j = 0; j <= 96; ++j) {
    const double R = std::exp2(j / 8.0);
    const double v = value(R);
    if (v < b.grid_min) {
      b.grid_min = v;
      b.grid_R = R;
    }
  }
  const double lm = std::log(static_cast<double>(m));
  b.formula_R = std::pow(static_cast<double>(m), 1.0 / (2.0 + delta)) * std::pow(lm, -2.0 / (2.0 + delta));
  b.formula_value = value(b.formula_R);
  // the formula R is one of the candidates
  if (b.formula_value < b.grid_min) {
    b.grid_min = b.formula_value;
    b.grid_R = b.formula_R;
  }
  return b;
}

}  // namespace dforge
