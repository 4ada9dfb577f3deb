#include "dforge/erdos_turan.hpp"

#include <cmath>

#include "dforge/error.hpp"
#include "dforge/frequencies.hpp"

namespace dforge {

nlohmann::json DiscrepancyReport::to_json() const {
  nlohmann::json j{{"set", set},
                   {"points", points},
                   {"m", m},
                   {"R", R},
                   {"bound", bound},
                   {"breakdown", {{"h0_term", h0_term}, {"sum_term", sum_term}}},
                   {"uncertainty", uncertainty},
                   {"contributing_frequencies", contributing_frequencies},
                   {"valid", valid()}};
  j["true_discrepancy"] = true_discrepancy ? nlohmann::json(*true_discrepancy) : nlohmann::json(nullptr);
  nlohmann::json e = nlohmann::json::object();
  if (alpha) e["alpha"] = *alpha;
  if (beta) e["beta"] = *beta;
  if (delta) e["delta"] = *delta;
  j["exponents"] = e;
  return j;
}

DiscrepancyReport et_bound(const TorusSet& set, const PointSet& points, const KernelTable& kernel, double R) {
  if (!(R >= 4.0)) throw ConfigError("Erdos-Turan bound needs R >= 4");
  return et_bound(set, points, HCoefficients(set, kernel, R));
}

DiscrepancyReport et_bound(const TorusSet& set, const PointSet& points, const HCoefficients& h) {
  const int d = set.dimension();
  if (points.dimension() != d) throw ConfigError("point and set dimensions differ");
  const double R = h.R();
  if (!(R >= 4.0)) throw ConfigError("Erdos-Turan bound needs R >= 4");
  DiscrepancyReport r;
  r.set = set.to_json();
  r.points = points.descriptor();
  r.m = points.size();
  r.R = R;
  const std::vector<int> zero(d, 0);
  r.h0_term = std::abs(h(zero));
  r.uncertainty = h.error(zero);
  std::vector<double> terms, errs;
  for_each_frequency(d, R, false, FrequencySet::Bound::Open, [&](std::span<const int> k) {
    const double psi = points.weyl_abs(k);
    if (psi == 0.0) return;
    ++r.contributing_frequencies;
    terms.push_back((std::abs(set.fourier_coefficient(k)) + std::abs(h(k))) * psi);
    errs.push_back(h.error(k) * psi);
  });
  r.sum_term = pairwise_sum(terms);
  r.uncertainty += pairwise_sum(errs);
  r.bound = r.h0_term + r.sum_term;
  r.true_discrepancy = true_discrepancy(points, set);
  return r;
}

RRule parse_rule(const std::string& name) {
  if (name == "lattice") return RRule::Lattice;
  if (name == "kronecker") return RRule::Kronecker;
  throw ConfigError("unknown R rule '" + name + "' (expected lattice or kronecker)");
}

double optimal_R(RRule rule, double m, int d, double alpha, double beta, double eps) {
  const double denom = d + beta - alpha;
  if (!(denom > 0.0)) throw ConfigError("R rule needs d + beta - alpha > 0");
  if (!(m > 1.0)) throw ConfigError("R rule needs m > 1");
  const double base = std::pow(m, 1.0 / denom);
  if (rule == RRule::Lattice) return base;
  return base * std::pow(std::log(m), -(d + 1 + eps) / denom);
}

RSearch search_R(const TorusSet& set, const PointSet& points, const KernelTable& kernel, RRule rule,
                 double alpha, double beta, double eps) {
  RSearch s;
  s.R_formula = optimal_R(rule, static_cast<double>(points.size()), set.dimension(), alpha, beta, eps);
  if (!(s.R_formula >= 4.0))
    throw ConfigError("formula R = " + std::to_string(s.R_formula) + " is below 4; increase m");
  if (!HCoefficients::feasible(set.dimension(), s.R_formula))
    throw ConfigError("formula R = " + std::to_string(s.R_formula) + " exceeds the H_R grid cap");
  s.at_formula = et_bound(set, points, kernel, s.R_formula);
  s.best = s.at_formula;
  s.trace.emplace_back(s.R_formula, s.at_formula.bound);
  for (int e = 2; e <= 12; ++e) {
    const double R = std::ldexp(1.0, e);
    if (!HCoefficients::feasible(set.dimension(), R)) break;
    const DiscrepancyReport r = et_bound(set, points, kernel, R);
    s.trace.emplace_back(R, r.bound);
    if (r.bound < s.best.bound) s.best = r;
  }
  for (auto* r : {&s.at_formula, &s.best}) {
    r->alpha = alpha;
    r->beta = beta;
  }
  return s;
}

double polytope_family_bound(const ChainSystem& chains, const WeylSpectrum& spectrum, double R) {
  if (!(R >= 1.0)) throw ConfigError("polytope family bound needs R >= 1");
  if (spectrum.R() < R) throw ConfigError("Weyl spectrum does not cover |k| < R");
  std::vector<double> terms;
  const FrequencySet& f = spectrum.frequencies();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f.norm(i) < R) || spectrum.value(i) == 0.0) continue;
    terms.push_back(chains.phi(f[i]) * spectrum.value(i));
  }
  return 1.0 / R + pairwise_sum(terms);
}

double polytope_family_bound(const ChainSystem& chains, const PointSet& points, double R) {
  if (!(R >= 1.0)) throw ConfigError("polytope family bound needs R >= 1");
  std::vector<double> terms;
  for_each_frequency(chains.dimension(), R, false, FrequencySet::Bound::Open, [&](std::span<const int> k) {
    const double psi = points.weyl_abs(k);
    if (psi != 0.0) terms.push_back(chains.phi(k) * psi);
  });
  return 1.0 / R + pairwise_sum(terms);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dforge
