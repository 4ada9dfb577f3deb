#include "dforge/chains.hpp"

#include <cmath>
#include <numbers>

#include "dforge/error.hpp"

namespace dforge {

namespace {

using Vec = std::vector<double>;
using Basis = std::vector<Vec>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Projection of v onto span(basis), basis orthonormal.
Vec project(const Basis& basis, const Vec& v) {
  Vec out(v.size(), 0.0);
  for (const auto& b : basis) {
    const double c = dot(b, v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += c * b[i];
  }
  return out;
}

// Orthonormal basis of {v in span(basis) : v . n = 0}, given the normalized
// projection n of the hyperplane normal onto the span.
Basis intersect(const Basis& basis, const Vec& n) {
  Basis out;
  for (const auto& b : basis) {
    Vec v = b;
    const double c = dot(v, n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * n[i];
    for (const auto& o : out) {
      const double co = dot(v, o);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= co * o[i];
    }
    const double len = std::sqrt(dot(v, v));
    if (len > 1e-9) {
      for (auto& x : v) x /= len;
      out.push_back(std::move(v));
    }
  }
  return out;
}

bool same_subspace(const Basis& a, const Basis& b) {
  if (a.size() != b.size()) return false;
  for (const auto& v : b) {
    const Vec p = project(a, v);
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r += (p[i] - v[i]) * (p[i] - v[i]);
    if (r > 1e-18) return false;
  }
  return true;
}

}  // namespace

ChainSystem::ChainSystem(std::vector<std::vector<double>> normals) : normals_(std::move(normals)) {
  if (normals_.empty()) throw ConfigError("hyperplane family is empty");
  d_ = static_cast<int>(normals_[0].size());
  if (d_ < 1 || d_ > 3) throw ConfigError("hyperplane family dimension must be 1, 2 or 3");
  for (auto& n : normals_) {
    if (static_cast<int>(n.size()) != d_) throw ConfigError("normals differ in dimension");
    const double len = std::sqrt(dot(n, n));
    if (!(len > 0.0)) throw ConfigError("zero normal in hyperplane family");
    for (auto& x : n) x /= len;
  }

  Basis full(d_, Vec(d_, 0.0));
  for (int i = 0; i < d_; ++i) full[i][i] = 1.0;

  // Depth-first over flags; `removed` collects e_d, e_{d-1}, ... as we descend.
  struct Frame {
    Basis span;
    Basis removed;
  };
  std::vector<Frame> stack{{full, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.span.size() == 1) {
      Basis chain;
      chain.push_back(f.span[0]);
      for (auto it = f.removed.rbegin(); it != f.removed.rend(); ++it) chain.push_back(*it);
      chains_.push_back(std::move(chain));
      continue;
    }
    std::vector<Basis> children;
    std::vector<Vec> directions;
    for (const auto& n : normals_) {
      Vec p = project(f.span, n);
      const double len = std::sqrt(dot(p, p));
      if (len < 1e-9) continue;  // span already inside this hyperplane
      for (auto& x : p) x /= len;
      Basis child = intersect(f.span, p);
      bool seen = false;
      for (const auto& c : children) seen = seen || same_subspace(c, child);
      if (seen) continue;
      children.push_back(child);
      directions.push_back(p);
    }
    // push in reverse so the first normal is expanded first
    for (std::size_t i = children.size(); i-- > 0;) {
      Frame next{children[i], f.removed};
      next.removed.push_back(directions[i]);
      stack.push_back(std::move(next));
    }
  }
  if (d_ == 1) {
    chains_.clear();
    chains_.push_back(full);
  }
}

ChainSystem ChainSystem::coordinate(int d) {
  std::vector<std::vector<double>> n(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) n[i][i] = 1.0;
  return ChainSystem(std::move(n));
}

ChainSystem ChainSystem::named(const std::string& name, int d) {
  if (name == "coordinate") return coordinate(d);
  if (name == "coordinate+diagonal") {
    if (d < 2) throw ConfigError("coordinate+diagonal needs d >= 2");
    std::vector<std::vector<double>> n(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) n[i][i] = 1.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        std::vector<double> v(d, 0.0);
        v[i] = 1.0;
        v[j] = -1.0;
        n.push_back(v);
      }
    return ChainSystem(std::move(n));
  }
  throw ConfigError("unknown hyperplane family '" + name + "'");
}

std::vector<double> ChainSystem::projections(std::size_t c, std::span<const double> xi) const {
  const Basis& b = chains_[c];
  std::vector<double> out(d_);
  double acc = 0.0;
  for (int j = 0; j < d_; ++j) {
    double comp = 0.0;
    for (int i = 0; i < d_; ++i) comp += b[j][i] * xi[i];
    acc += comp * comp;
    out[j] = std::sqrt(acc);
  }
  return out;
}

double ChainSystem::phi(std::span<const double> xi) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  for (const auto& b : chains_) {
    double acc = 0.0, prod = 1.0;
    for (int j = 0; j < d_; ++j) {
      double comp = 0.0;
      for (int i = 0; i < d_; ++i) comp += b[j][i] * xi[i];
      acc += comp * comp;
      const double p = two_pi * std::sqrt(acc);
      if (p > 1.0) prod /= p;
    }
    total += prod;
  }
  return total;
}

double ChainSystem::phi(std::span<const int> k) const {
  double xi[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < d_; ++i) xi[i] = k[i];
  return phi(std::span<const double>(xi, d_));
}

}  // namespace dforge
