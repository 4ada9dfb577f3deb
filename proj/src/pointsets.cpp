#include "dforge/pointsets.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "dforge/error.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer '" + s + "' for " + what);
  }
}

double parse_real(const std::string& s) {
  if (s == "sqrt2-1") return static_cast<double>(kSqrt2Minus1);
  if (s == "sqrt3-1") return static_cast<double>(kSqrt3Minus1);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad real '" + s + "' in point descriptor");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

PointSet PointSet::lattice(int d, long m) {
  if (d < 1 || d > 3) throw ConfigError("lattice dimension must be 1, 2 or 3");
  if (m < 1) throw ConfigError("lattice needs m >= 1");
  const long side = std::lround(std::pow(static_cast<double>(m), 1.0 / d));
  long check = 1;
  for (int j = 0; j < d; ++j) check *= side;
  if (check != m) throw ConfigError("lattice size m = " + std::to_string(m) + " is not a perfect " +
                                    std::to_string(d) + "-th power");
  PointSet p;
  p.kind_ = Kind::Lattice;
  p.d_ = d;
  p.m_ = m;
  p.side_ = side;
  p.coords_.resize(static_cast<std::size_t>(m) * d);
  for (long j = 0; j < m; ++j) {
    long r = j;
    for (int i = d - 1; i >= 0; --i) {
      p.coords_[j * d + i] = static_cast<double>(r % side) / side;
      r /= side;
    }
  }
  return p;
}

PointSet PointSet::kronecker(std::vector<double> x, long m) {
  const int d = static_cast<int>(x.size());
  if (d < 1 || d > 3) throw ConfigError("Kronecker dimension must be 1, 2 or 3");
  if (m < 1) throw ConfigError("Kronecker set needs m >= 1");
  PointSet p;
  p.kind_ = Kind::Kronecker;
  p.d_ = d;
  p.m_ = m;
  p.x_ = std::move(x);
  p.coords_.resize(static_cast<std::size_t>(m) * d);
  for (long j = 1; j <= m; ++j)
    for (int i = 0; i < d; ++i) {
      const long double v = static_cast<long double>(j) * p.x_[i];
      double f = static_cast<double>(v - std::floor(v));
      if (f >= 1.0) f = 0.0;
      p.coords_[(j - 1) * d + i] = f;
    }
  return p;
}

PointSet PointSet::korobov(std::vector<long> g, long m) {
  const int d = static_cast<int>(g.size());
  if (d < 1 || d > 3) throw ConfigError("Korobov dimension must be 1, 2 or 3");
  if (!is_prime(m)) throw ConfigError("Korobov modulus m = " + std::to_string(m) + " is not prime");
  for (long gi : g)
    if (gi < 1 || gi > m - 1) throw ConfigError("Korobov generator entries must lie in [1, m-1]");
  PointSet p;
  p.kind_ = Kind::Korobov;
  p.d_ = d;
  p.m_ = m;
  p.g_ = std::move(g);
  p.coords_.resize(static_cast<std::size_t>(m) * d);
  for (long j = 1; j <= m; ++j)
    for (int i = 0; i < d; ++i) p.coords_[(j - 1) * d + i] = static_cast<double>((j * p.g_[i]) % m) / m;
  return p;
}

PointSet PointSet::explicit_points(int d, std::vector<double> coords) {
  if (d < 1 || d > 3) throw ConfigError("point dimension must be 1, 2 or 3");
  if (coords.empty() || coords.size() % d != 0) throw ConfigError("point coordinates do not fill rows");
  PointSet p;
  p.kind_ = Kind::Explicit;
  p.d_ = d;
  p.m_ = static_cast<long>(coords.size() / d);
  for (auto& c : coords) {
    c -= std::floor(c);
    if (c >= 1.0) c = 0.0;
  }
  p.coords_ = std::move(coords);
  return p;
}

PointSet PointSet::from_descriptor(const std::string& descriptor, int d) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) throw ConfigError("point descriptor needs a 'kind:' prefix");
  const std::string kind = descriptor.substr(0, colon);
  const std::string rest = descriptor.substr(colon + 1);
  if (kind == "csv") return read_csv(rest);
  std::map<std::string, std::string> kv;
  for (const auto& item : split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("point descriptor entry '" + item + "' lacks '='");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (!kv.count("m")) throw ConfigError("point descriptor needs m=");
  const long m = parse_long(kv["m"], "m");
  if (kind == "lattice") return lattice(d, m);
  if (kind == "korobov") {
    if (!kv.count("g")) throw ConfigError("korobov descriptor needs g=");
    std::vector<long> g;
    for (const auto& s : split(kv["g"], ';')) g.push_back(parse_long(s, "g"));
    return korobov(std::move(g), m);
  }
  if (kind == "kronecker") {
    if (!kv.count("x")) throw ConfigError("kronecker descriptor needs x=");
    std::vector<double> x;
    for (const auto& s : split(kv["x"], ';')) x.push_back(parse_real(s));
    return kronecker(std::move(x), m);
  }
  throw ConfigError("unknown point set kind '" + kind + "'");
}

PointSet PointSet::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read points from " + path);
  std::vector<double> coords;
  int d = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    try {
      for (const auto& c : cells) row.push_back(std::stod(c));
    } catch (const std::exception&) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw ConfigError("non-numeric row in " + path);
    }
    first = false;
    if (d == 0) d = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != d) throw ConfigError("ragged rows in " + path);
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return explicit_points(d, std::move(coords));
}

void PointSet::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write points to " + path);
  out << std::setprecision(17);
  for (int i = 0; i < d_; ++i) out << (i ? ",x" : "x") << i + 1;
  out << '\n';
  for (long j = 0; j < m_; ++j) {
    for (int i = 0; i < d_; ++i) out << (i ? "," : "") << coords_[j * d_ + i];
    out << '\n';
  }
}

std::string PointSet::descriptor() const {
  std::ostringstream s;
  s << std::setprecision(17);
  switch (kind_) {
    case Kind::Lattice:
      s << "lattice:m=" << m_;
      break;
    case Kind::Korobov:
      s << "korobov:m=" << m_ << ",g=";
      for (std::size_t i = 0; i < g_.size(); ++i) s << (i ? ";" : "") << g_[i];
      break;
    case Kind::Kronecker:
      s << "kronecker:m=" << m_ << ",x=";
      for (std::size_t i = 0; i < x_.size(); ++i) s << (i ? ";" : "") << x_[i];
      break;
    default:
      s << "explicit:m=" << m_;
  }
  return s.str();
}

Complex PointSet::weyl_sum(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != d_) throw ConfigError("frequency dimension does not match points");
  switch (kind_) {
    case Kind::Lattice: {
      for (int c : k)
        if (c % side_ != 0) return 0.0;
      return 1.0;
    }
    case Kind::Korobov: {
      long s = 0;
      for (int i = 0; i < d_; ++i) s = (s + (static_cast<long>(k[i]) % m_) * g_[i]) % m_;
      return s == 0 ? 1.0 : 0.0;
    }
    case Kind::Kronecker: {
      long double theta = 0.0L;
      for (int i = 0; i < d_; ++i) theta += static_cast<long double>(k[i]) * x_[i];
      theta -= std::floor(theta);
      const double th = static_cast<double>(theta);
      const double den = std::sin(kPi * th);
      if (std::abs(den) < 1e-9) break;  // near resonance: sum directly
      const double mag = std::sin(kPi * m_ * th) / (m_ * den);
      return mag * std::polar(1.0, kPi * (m_ + 1) * th);
    }
    default:
      break;
  }
  std::vector<double> re(m_), im(m_);
  for (long j = 0; j < m_; ++j) {
    double phase = 0.0;
    for (int i = 0; i < d_; ++i) phase += k[i] * coords_[j * d_ + i];
    re[j] = std::cos(2.0 * kPi * phase);
    im[j] = std::sin(2.0 * kPi * phase);
  }
  return Complex(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(m_);
}

WeylSpectrum::WeylSpectrum(const PointSet& points, double R)
    : freqs_(points.dimension(), R, false, FrequencySet::Bound::Open) {
  if (!(R >= 1.0)) throw ConfigError("Weyl spectrum needs R >= 1");
  values_.resize(freqs_.size());
  for (std::size_t i = 0; i < freqs_.size(); ++i) values_[i] = points.weyl_abs(freqs_[i]);
}

double WeylSpectrum::operator()(std::span<const int> k) const {
  const std::size_t i = freqs_.find(k);
  if (i == freqs_.size()) throw ConfigError("frequency outside the Weyl spectrum range");
  return values_[i];
}

long count_inside(const PointSet& points, const TorusSet& set) {
  if (points.dimension() != set.dimension()) throw ConfigError("point and set dimensions differ");
  long c = 0;
  for (long j = 0; j < points.size(); ++j) c += set.contains(points[j]) ? 1 : 0;
  return c;
}

double true_discrepancy(const PointSet& points, const TorusSet& set) {
  const long c = count_inside(points, set);
  return std::abs(set.measure() - static_cast<double>(c) / static_cast<double>(points.size()));
}

double schmidt_sum(std::span<const double> x, double R) {
  const int d = static_cast<int>(x.size());
  std::vector<double> terms;
  for_each_frequency(d, R, false, FrequencySet::Bound::Open, [&](std::span<const int> k) {
    long double t = 0.0L;
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      t += static_cast<long double>(k[i]) * x[i];
      n2 += double(k[i]) * k[i];
    }
    const double frac = static_cast<double>(std::abs(t - std::round(t)));
    if (frac < 1e-12) {
      std::string ks;
      for (int i = 0; i < d; ++i) ks += (i ? "," : "") + std::to_string(k[i]);
      throw NumericalError("rational resonance in the Schmidt sum at k = (" + ks + "); sum is infinite");
    }
    terms.push_back(std::pow(n2, -0.5 * d) / frac);
  });
  return pairwise_sum(terms);
}

}  // namespace dforge
