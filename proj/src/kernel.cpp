#include "dforge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "dforge/error.hpp"
#include "dforge/quadrature.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kFormat = "dforge.kernel";
constexpr int kFormatVersion = 1;
// Absolute floor for the autocorrelation quadratures; m*m is O(1).
constexpr double kAbsTol = 1e-14;

void check_dimension(int d) {
  if (d < 1 || d > 3) throw ConfigError("dimension must be 1, 2 or 3, got " + std::to_string(d));
}

double raw_bump(double r) {
  const double q = 0.25 - r * r;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// r^{d-1} without pow for the three supported dimensions.
double radial_power(int d, double r) { return d == 1 ? 1.0 : (d == 2 ? r : r * r); }

double autocorrelation_1d(const BumpProfile& m, double s, double tol) {
  auto f = [&](double t) { return m(std::abs(t)) * m(std::abs(s - t)); };
  return integrate_adaptive(f, s - 0.5, 0.5, tol, kAbsTol, "1-d autocorrelation");
}

double autocorrelation_2d(const BumpProfile& m, double s, double tol) {
  if (s == 0.0) {
    auto f = [&](double r) { return r * m(r) * m(r); };
    return 2.0 * kPi * integrate_adaptive(f, 0.0, 0.5, tol, kAbsTol, "autocorrelation at 0");
  }
  // Polar coordinates about the origin; the second factor is supported on the
  // arc where |y - s e1| < 1/2.
  auto outer = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double mr = m(r);
    if (mr == 0.0) return 0.0;
    const double c = (r * r + s * s - 0.25) / (2.0 * r * s);
    if (c >= 1.0) return 0.0;
    const double theta_max = c <= -1.0 ? kPi : std::acos(c);
    auto inner = [&](double th) {
      return m(std::sqrt(std::max(r * r + s * s - 2.0 * r * s * std::cos(th), 0.0)));
    };
    return 2.0 * r * mr *
           integrate_adaptive(inner, 0.0, theta_max, tol, kAbsTol, "2-d autocorrelation (angle)");
  };
  return integrate_adaptive(outer, std::max(0.0, s - 0.5), 0.5, tol, kAbsTol,
                            "2-d autocorrelation (radius)");
}

double autocorrelation_3d(const BumpProfile& m, double s, double tol) {
  if (s == 0.0) {
    auto f = [&](double r) { return r * r * m(r) * m(r); };
    return 4.0 * kPi * integrate_adaptive(f, 0.0, 0.5, tol, kAbsTol, "autocorrelation at 0");
  }
  // Spherical shells about the origin reduce the angular integral to
  // (2 pi / (r s)) int_{|r-s|}^{r+s} u m(u) du.
  auto primitive = [&](double v) {
    v = std::min(v, 0.5);
    if (v <= 0.0) return 0.0;
    return integrate_adaptive([&](double u) { return u * m(u); }, 0.0, v, tol, kAbsTol,
                              "3-d autocorrelation primitive");
  };
  auto outer = [&](double r) {
    const double mr = m(r);
    if (mr == 0.0) return 0.0;
    return r * mr * (primitive(r + s) - primitive(std::abs(r - s)));
  };
  return 2.0 * kPi / s *
         integrate_adaptive(outer, std::max(0.0, s - 0.5), 0.5, tol, kAbsTol,
                            "3-d autocorrelation (radius)");
}

}  // namespace

double sphere_surface(int d) {
  check_dimension(d);
  return d == 1 ? 2.0 : (d == 2 ? 2.0 * kPi : 4.0 * kPi);
}

double radial_plane_wave(int d, double z) {
  switch (d) {
    case 1:
      return std::cos(z);
    case 2:
      return ::j0(z);
    case 3:
      return std::abs(z) < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    default:
      check_dimension(d);
      return 0.0;
  }
}

void KernelConfig::validate() const {
  check_dimension(dimension);
  if (!(bump_grid_step > 0.0 && bump_grid_step <= 1.0 / 64))
    throw ConfigError("bump_grid_step must lie in (0, 1/64]");
  if (!(khat_step > 0.0 && khat_step <= 1.0 / 64)) throw ConfigError("khat_step must lie in (0, 1/64]");
  if (!(table_step > 0.0 && table_step <= 0.25)) throw ConfigError("table_step must lie in (0, 1/4]");
  if (!(x_max >= 20.0)) throw ConfigError("x_max must be at least 20");
  if (!(t_max >= x_max)) throw ConfigError("t_max must be at least x_max");
  if (hankel_panels < 8) throw ConfigError("hankel_panels must be at least 8");
  if (!(quadrature_tolerance > 0.0) || !(refinement_tolerance > 0.0))
    throw ConfigError("tolerances must be positive");
}

void to_json(nlohmann::json& j, const KernelConfig& c) {
  j = nlohmann::json{{"dimension", c.dimension},
                     {"bump_grid_step", c.bump_grid_step},
                     {"khat_step", c.khat_step},
                     {"table_step", c.table_step},
                     {"x_max", c.x_max},
                     {"t_max", c.t_max},
                     {"hankel_panels", c.hankel_panels},
                     {"quadrature_tolerance", c.quadrature_tolerance},
                     {"refinement_tolerance", c.refinement_tolerance}};
}

void from_json(const nlohmann::json& j, KernelConfig& c) {
  KernelConfig def;
  c.dimension = j.value("dimension", def.dimension);
  c.bump_grid_step = j.value("bump_grid_step", def.bump_grid_step);
  c.khat_step = j.value("khat_step", def.khat_step);
  c.table_step = j.value("table_step", def.table_step);
  c.x_max = j.value("x_max", def.x_max);
  c.t_max = j.value("t_max", def.t_max);
  c.hankel_panels = j.value("hankel_panels", def.hankel_panels);
  c.quadrature_tolerance = j.value("quadrature_tolerance", def.quadrature_tolerance);
  c.refinement_tolerance = j.value("refinement_tolerance", def.refinement_tolerance);
}

// ---------------------------------------------------------------- bump

BumpProfile BumpProfile::build(int d, double grid_step, double rel_tol) {
  check_dimension(d);
  if (!(grid_step > 0.0 && grid_step <= 1.0 / 64))
    throw ConfigError("bump grid_step must lie in (0, 1/64]");
  auto f = [d](double r) {
    const double b = raw_bump(r);
    return b * b * radial_power(d, r);
  };
  const double raw = sphere_surface(d) * integrate_adaptive(f, 0.0, 0.5, rel_tol, 0.0, "bump norm");

  BumpProfile p;
  p.d_ = d;
  p.c_ = 1.0 / std::sqrt(raw);
  p.step_ = grid_step;
  const auto n = static_cast<std::size_t>(std::ceil(0.5 / grid_step - 1e-12));
  p.samples_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p.samples_[i] = p(std::min(0.5, i * grid_step));
  return p;
}

double BumpProfile::operator()(double r) const { return c_ * raw_bump(std::abs(r)); }

double BumpProfile::l2_norm_squared(double rel_tol) const {
  auto f = [this](double r) {
    const double v = (*this)(r);
    return v * v * radial_power(d_, r);
  };
  return sphere_surface(d_) * integrate_adaptive(f, 0.0, 0.5, rel_tol, 0.0, "bump norm");
}

double autocorrelation_at(const BumpProfile& bump, double s, double rel_tol) {
  s = std::abs(s);
  if (s >= 1.0) return 0.0;
  switch (bump.dimension()) {
    case 1:
      return autocorrelation_1d(bump, s, rel_tol);
    case 2:
      return autocorrelation_2d(bump, s, rel_tol);
    default:
      return autocorrelation_3d(bump, s, rel_tol);
  }
}

RadialTable::RadialTable(double step_, std::vector<double> values_)
    : step(step_), values(std::move(values_)), interp(0.0, step_, values) {}

double RadialTable::operator()(double r) const {
  if (r < 0.0 || r > back()) return 0.0;
  return interp(r);
}

RadialTable autocorrelate(const BumpProfile& bump, double step, double rel_tol) {
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  if (std::abs(n * step - 1.0) > 1e-12) throw ConfigError("autocorrelation step must divide 1");
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = autocorrelation_at(bump, i * step, rel_tol);
  return RadialTable(step, std::move(v));
}

// ---------------------------------------------------------------- kernel

namespace {

double bessel_weight(int d, double rho) { return std::pow(1.0 + rho * rho, -0.5 * (d + 1)); }

std::size_t grid_count(double length, double step) {
  const auto n = static_cast<std::size_t>(std::llround(length / step));
  if (std::abs(n * step - length) > 1e-9 * length)
    throw ConfigError("table step must divide the table length");
  return n;
}

}  // namespace

KernelTable KernelTable::build(const KernelConfig& config) {
  config.validate();
  return build(BumpProfile::build(config.dimension, config.bump_grid_step), config);
}

KernelTable KernelTable::build(const BumpProfile& bump, const KernelConfig& config) {
  config.validate();
  if (bump.dimension() != config.dimension) throw ConfigError("bump and kernel dimensions differ");
  const int d = config.dimension;
  const double omega = sphere_surface(d);
  const double aq_tol = std::min(1e-10, config.quadrature_tolerance);

  KernelTable t;
  t.config_ = config;
  t.bump_normalization_ = bump.normalization();

  // K-hat at Gauss nodes (used for the inverse transform) and on a uniform
  // grid (used for lookups).
  CompositeGauss<16> rule(0.0, 1.0, config.hankel_panels);
  std::vector<double> node_khat(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double rho = rule.nodes[q];
    node_khat[q] = bessel_weight(d, rho) * autocorrelation_at(bump, rho, aq_tol);
  }
  {
    RadialTable a = autocorrelate(bump, config.khat_step, aq_tol);
    std::vector<double> kh(a.values.size());
    for (std::size_t i = 0; i < kh.size(); ++i)
      kh[i] = bessel_weight(d, i * config.khat_step) * a.values[i];
    t.khat_ = RadialTable(config.khat_step, std::move(kh));
  }
  double interp_err = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    interp_err = std::max(interp_err, std::abs(t.khat_(rule.nodes[q]) - node_khat[q]));
  t.khat_interp_error_ = interp_err;

  std::vector<double> node_weight(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    node_weight[q] = omega * rule.weights[q] * node_khat[q] * radial_power(d, rule.nodes[q]);
  auto k_direct = [&](double x) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += node_weight[q] * radial_plane_wave(d, 2.0 * kPi * rule.nodes[q] * x);
    return s;
  };

  const double h = config.table_step;
  const std::size_t nx = grid_count(config.x_max, h);
  std::vector<double> kv(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) kv[i] = k_direct(i * h);
  t.k_ = RadialTable(h, kv);

  // Conservative |K(x)| <= C x^{-(d+2)} beyond x_max, fitted on the last tenth.
  double c_fit = 0.0;
  for (std::size_t i = 0; i <= nx; ++i) {
    const double x = i * h;
    if (x >= 0.9 * config.x_max) c_fit = std::max(c_fit, std::abs(kv[i]) * std::pow(x, d + 2));
  }
  t.tail_constant_ = 2.0 * c_fit;
  auto remainder = [&](double r) { return omega * t.tail_constant_ / (2.0 * r * r); };
  t.tail_remainder_ = remainder(config.x_max);

  // Shell masses on each table cell, summed from the far end.
  using Rule8 = boost::math::quadrature::gauss<double, 8>;
  std::vector<double> shell(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double a = i * h;
    auto f = [&](double r) { return k_direct(r) * radial_power(d, r); };
    shell[i] = omega * Rule8::integrate(f, a, a + h);
  }
  const std::size_t nt = grid_count(config.t_max, h);
  std::vector<double> tail(nt + 1);
  double acc = t.tail_remainder_;
  tail[nx] = acc;
  for (std::size_t i = nx; i-- > 0;) {
    acc += shell[i];
    tail[i] = acc;
  }
  for (std::size_t i = nx + 1; i <= nt; ++i) tail[i] = remainder(i * h);
  t.tail_ = RadialTable(h, std::move(tail));

  const double inner_mass = t.tail_.values[0] - t.tail(1.0);
  if (!(inner_mass > 0.0)) throw NumericalError("kernel mass on the unit ball is not positive");
  t.gamma_ = std::exp(2.0 * kPi) / inner_mass;

  t.check_claims();
  return t;
}

void KernelTable::check_claims() const {
  const double tol = config_.quadrature_tolerance;
  if (min_k() < -tol)
    throw NumericalError("kernel table is negative (min " + std::to_string(min_k()) +
                         "); quadrature failure");
  if (std::abs(tail_.values[0] - 1.0) > config_.refinement_tolerance)
    throw NumericalError("tail mass I(0) = " + std::to_string(tail_.values[0]) + " is not 1");
  const double ratio = std::exp(-2.0 * kPi);
  const std::size_t shift = static_cast<std::size_t>(std::llround(1.0 / tail_.step));
  for (std::size_t i = 0; i + shift < tail_.values.size(); ++i) {
    if (tail_.values[i + shift] < ratio * tail_.values[i] - 1e-9)
      throw NumericalError("tail ratio I(t+1) >= exp(-2 pi) I(t) fails at t = " +
                           std::to_string(i * tail_.step));
  }
}

double KernelTable::khat(double rho) const {
  rho = std::abs(rho);
  return rho >= 1.0 ? 0.0 : khat_(rho);
}

double KernelTable::k(double x) const {
  x = std::abs(x);
  if (x <= k_.back()) return k_.interp(x);
  return tail_constant_ * std::pow(x, -(dimension() + 2));
}

double KernelTable::tail(double t) const {
  if (t < 0.0) throw ConfigError("tail mass needs t >= 0");
  if (t <= tail_.back()) return tail_.interp(t);
  return sphere_surface(dimension()) * tail_constant_ / (2.0 * t * t);
}

double KernelTable::psi(double t) const {
  if (t < 0.0) throw ConfigError("psi needs t >= 0");
  return 4.0 * gamma_ * tail(0.5 * t);
}

double KernelTable::min_k() const { return *std::min_element(k_.values.begin(), k_.values.end()); }

double KernelTable::mean_trapezoid() const {
  const int d = dimension();
  const double h = k_.step;
  const auto& v = k_.values;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    s += w * v[i] * radial_power(d, i * h);
  }
  s *= h;
  // f(r) = K(r) r^{d-1}: f'(0) = K(0) for d = 2, zero otherwise (K is even).
  if (d == 2) s += h * h / 12.0 * v[0];
  return sphere_surface(d) * s + tail_remainder_;
}

double KernelTable::khat_from_table(double rho) const {
  const int d = dimension();
  const double h = k_.step;
  const auto& v = k_.values;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = i * h;
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    s += w * v[i] * radial_power(d, x) * radial_plane_wave(d, 2.0 * kPi * rho * x);
  }
  s *= h;
  if (d == 2) s += h * h / 12.0 * v[0];
  return sphere_surface(d) * s;
}

nlohmann::json KernelTable::to_json() const {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kFormatVersion;
  j["config"] = config_;
  j["bump"] = {{"profile", "c*exp(-1/(1/4-r^2)), r<1/2"}, {"normalization", bump_normalization_}};
  j["khat"] = {{"step", khat_.step}, {"values", khat_.values}};
  j["k"] = {{"step", k_.step}, {"values", k_.values}};
  j["tail"] = {{"step", tail_.step}, {"values", tail_.values}};
  j["gamma"] = gamma_;
  j["tail_constant"] = tail_constant_;
  j["tail_remainder"] = tail_remainder_;
  j["khat_interp_error"] = khat_interp_error_;
  return j;
}

KernelTable KernelTable::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kFormatVersion)
      throw ConfigError("not a kernel table document (format/version mismatch)");
    KernelTable t;
    t.config_ = j.at("config").get<KernelConfig>();
    t.config_.validate();
    t.bump_normalization_ = j.at("bump").at("normalization").get<double>();
    auto table = [&](const char* key) {
      return RadialTable(j.at(key).at("step").get<double>(),
                         j.at(key).at("values").get<std::vector<double>>());
    };
    t.khat_ = table("khat");
    t.k_ = table("k");
    t.tail_ = table("tail");
    t.gamma_ = j.at("gamma").get<double>();
    t.tail_constant_ = j.at("tail_constant").get<double>();
    t.tail_remainder_ = j.at("tail_remainder").get<double>();
    t.khat_interp_error_ = j.at("khat_interp_error").get<double>();
    t.check_claims();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed kernel table: ") + e.what());
  }
}

void KernelTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write kernel table to " + path);
  out << to_json().dump() << '\n';
}

KernelTable KernelTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read kernel table from " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("kernel table " + path + " is not JSON: " + e.what());
  }
  return from_json(j);
}

double decay_constant(const KernelTable& kernel, double alpha) {
  const RadialTable& tail = kernel.tail_table();
  double c = 0.0;
  for (std::size_t i = 0; i < tail.values.size(); ++i) {
    const double t = 2.0 * i * tail.step;
    c = std::max(c, 4.0 * kernel.gamma() * tail.values[i] * std::pow(1.0 + t, alpha));
  }
  return c;
}

KernelTable load_or_build_kernel(const KernelConfig& config, const std::string& path) {
  if (!path.empty()) {
    std::ifstream probe(path);
    if (probe) {
      KernelTable t = KernelTable::load(path);
      if (nlohmann::json(t.config()) == nlohmann::json(config)) return t;
    }
  }
  KernelTable t = KernelTable::build(config);
  if (!path.empty()) t.save(path);
  return t;
}

}  // namespace dforge
