#include "dforge/majorant.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>

#include "dforge/error.hpp"
#include "dforge/fft.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void grid_point(std::size_t idx, int d, int n, std::vector<double>& x) {
  for (int j = d - 1; j >= 0; --j) {
    x[j] = static_cast<double>(idx % n) / n;
    idx /= n;
  }
}

void record(ViolationStat& s, double v) {
  if (v > 0.0) {
    s.max_violation = std::max(s.max_violation, v);
    s.fraction += 1.0;
  }
}

}  // namespace

TrigPolynomial::TrigPolynomial(int d, double R, std::vector<Complex> coefficients)
    : freqs_(d, R, true, FrequencySet::Bound::Open), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != freqs_.size()) throw ConfigError("coefficient count does not match |k| < R");
}

Complex TrigPolynomial::coefficient(std::span<const int> k) const {
  const std::size_t i = freqs_.find(k);
  return i == freqs_.size() ? Complex(0.0) : coeffs_[i];
}

double TrigPolynomial::evaluate(std::span<const double> x) const {
  const int d = dimension();
  double s = 0.0;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    const auto k = freqs_[i];
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += k[j] * x[j];
    s += (coeffs_[i] * std::polar(1.0, 2.0 * kPi * phase)).real();
  }
  return s;
}

std::vector<double> TrigPolynomial::synthesize(int n) const {
  const int d = dimension();
  if (!(n > 2.0 * degree())) throw ConfigError("synthesis grid must exceed twice the degree");
  std::vector<Complex> grid(ipow(n, d), 0.0);
  for (std::size_t i = 0; i < freqs_.size(); ++i) grid[fft_index(freqs_[i].data(), d, n)] = coeffs_[i];
  const auto out = fft_grid(grid, d, n, FftSign::Backward);
  std::vector<double> v(out.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = out[i].real();
  return v;
}

double TrigPolynomial::hermitian_defect() const {
  double worst = 0.0;
  std::vector<int> neg(dimension());
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    const auto k = freqs_[i];
    for (int j = 0; j < dimension(); ++j) neg[j] = -k[j];
    worst = std::max(worst, std::abs(coeffs_[i] - std::conj(coefficient(neg))));
  }
  return worst;
}

nlohmann::json TrigPolynomial::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int v : freqs_[i]) row.push_back(v);
    row.push_back(coeffs_[i].real());
    row.push_back(coeffs_[i].imag());
    c.push_back(row);
  }
  return {{"dimension", dimension()}, {"degree", degree()}, {"coefficients", c}};
}

MajorantPair majorant_pair(const TorusSet& set, const KernelTable& kernel, double R) {
  if (!(R >= 4.0)) throw ConfigError("majorant pair needs R >= 4");
  return majorant_pair(set, kernel, HCoefficients(set, kernel, R));
}

MajorantPair majorant_pair(const TorusSet& set, const KernelTable& kernel, const HCoefficients& h) {
  const double R = h.R();
  const int d = set.dimension();
  if (!(R >= 4.0)) throw ConfigError("majorant pair needs R >= 4");
  if (kernel.dimension() != d) throw ConfigError("kernel and set dimensions differ");
  // H_R = psi(2R dist)/4 and gamma I(R dist) must agree.
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0})
    if (std::abs(kernel.psi(2.0 * t) / 4.0 - kernel.gamma() * kernel.tail(t)) > 1e-12 * kernel.gamma())
      throw InvariantViolation("psi(2t)/4 = gamma I(t)", kernel.psi(2.0 * t) / 4.0, kernel.gamma() * kernel.tail(t));

  const FrequencySet freqs(d, R, true, FrequencySet::Bound::Open);
  std::vector<Complex> a(freqs.size()), b(freqs.size());
  MajorantPair p;
  p.R = R;
  p.h_grid_points = h.grid_points();
  double sum_mag = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const auto k = freqs[i];
    const double kh = kernel.khat(freqs.norm(i) / R);
    const Complex chi = set.fourier_coefficient(k);
    const Complex hk = h(k);
    a[i] = kh * (chi - hk);
    b[i] = kh * (chi + hk);
    p.h_error_term += std::abs(kh) * h.error(k);
    sum_mag += std::abs(chi) + std::abs(hk);
  }
  p.khat_error_term = kernel.khat_interp_error() * sum_mag;
  p.budget = p.h_error_term + p.khat_error_term + 1e-10;
  p.A = TrigPolynomial(d, R, std::move(a));
  p.B = TrigPolynomial(d, R, std::move(b));
  return p;
}

bool SandwichReport::within_budget() const {
  return minorant.max_violation <= budget && majorant.max_violation <= budget &&
         width.max_violation <= budget;
}

nlohmann::json SandwichReport::to_json() const {
  auto stat = [](const ViolationStat& s) {
    return nlohmann::json{{"max_violation", s.max_violation}, {"fraction", s.fraction}};
  };
  return {{"R", R},
          {"grid_n", grid_n},
          {"budget", budget},
          {"minorant_violation", stat(minorant)},
          {"majorant_violation", stat(majorant)},
          {"width_violation", stat(width)},
          {"far_field_max_width", far_field_max_width},
          {"far_field_psi", far_field_psi},
          {"max_width_ratio", max_width_ratio},
          {"A_mean", a_mean},
          {"B_mean", b_mean},
          {"measure", measure},
          {"within_budget", within_budget()}};
}

SandwichReport sandwich_report(const MajorantPair& pair, const TorusSet& set, const KernelTable& kernel,
                               int grid_n, const std::string& csv_path) {
  const int d = set.dimension();
  const double R = pair.R;
  if (!(grid_n >= 4.0 * R)) throw ConfigError("sandwich grid needs at least 4R points per axis");
  SandwichReport rep;
  rep.R = R;
  rep.grid_n = grid_n;
  rep.budget = pair.budget;
  rep.measure = set.measure();
  rep.a_mean = pair.A.coefficient(std::vector<int>(d, 0)).real();
  rep.b_mean = pair.B.coefficient(std::vector<int>(d, 0)).real();
  rep.far_field_psi = kernel.psi(8.0);

  const auto A = pair.A.synthesize(grid_n);
  const auto B = pair.B.synthesize(grid_n);

  std::ofstream csv;
  if (!csv_path.empty()) {
    if (d != 2) throw ConfigError("sandwich CSV output is defined for d = 2");
    csv.open(csv_path);
    if (!csv) throw ConfigError("cannot write " + csv_path);
    csv << std::setprecision(10) << "x1,x2,chi,A,B,psi_bound\n";
  }
  std::vector<double> x(d);
  for (std::size_t i = 0; i < A.size(); ++i) {
    grid_point(i, d, grid_n, x);
    const double chi = set.contains(x) ? 1.0 : 0.0;
    const double dist = set.boundary_distance(x);
    const double psi = kernel.psi(R * dist);
    record(rep.minorant, A[i] - chi);
    record(rep.majorant, chi - B[i]);
    record(rep.width, (B[i] - A[i]) - psi);
    if (dist >= 8.0 / R) rep.far_field_max_width = std::max(rep.far_field_max_width, B[i] - A[i]);
    if (dist <= 1.0 / R) rep.max_width_ratio = std::max(rep.max_width_ratio, (B[i] - A[i]) / psi);
    if (csv.is_open()) csv << x[0] << ',' << x[1] << ',' << chi << ',' << A[i] << ',' << B[i] << ',' << psi << '\n';
  }
  const double n = static_cast<double>(A.size());
  rep.minorant.fraction /= n;
  rep.majorant.fraction /= n;
  rep.width.fraction /= n;
  return rep;
}

double smoothing_claim_excess(const TorusSet& set, const KernelTable& kernel, double R, int samples,
                              std::uint64_t seed) {
  const int d = set.dimension();
  const FrequencySet freqs(d, R, true, FrequencySet::Bound::Open);
  std::vector<Complex> c(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i)
    c[i] = kernel.khat(freqs.norm(i) / R) * set.fourier_coefficient(freqs[i]);
  const TrigPolynomial smooth(d, R, std::move(c));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(d);
  double worst = -1e300;
  for (int s = 0; s < samples; ++s) {
    for (auto& v : x) v = u(rng);
    const double chi = set.contains(x) ? 1.0 : 0.0;
    const double lhs = std::abs(chi - smooth.evaluate(x));
    worst = std::max(worst, lhs - kernel.tail(R * set.boundary_distance(x)));
  }
  return worst;
}

}  // namespace dforge
