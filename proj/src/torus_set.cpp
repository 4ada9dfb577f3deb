#include "dforge/torus_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dforge/error.hpp"

namespace dforge {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(int d) {
  if (d < 1 || d > 3) throw ConfigError("set dimension must be 1, 2 or 3");
}

double wrap01(double v) {
  v -= std::floor(v);
  return v >= 1.0 ? 0.0 : v;
}

// Calls fn on every offset vector in {-1,0,1}^d.
template <class F>
void for_each_shift(int d, F&& fn) {
  int count = 1;
  for (int j = 0; j < d; ++j) count *= 3;
  std::array<double, 3> n{};
  for (int c = 0; c < count; ++c) {
    int r = c;
    for (int j = 0; j < d; ++j) {
      n[j] = static_cast<double>(r % 3 - 1);
      r /= 3;
    }
    fn(std::span<const double>(n.data(), d));
  }
}

double segment_distance(const std::array<double, 2>& p, const std::array<double, 2>& q, double x,
                        double y) {
  const double ux = q[0] - p[0], uy = q[1] - p[1];
  const double wx = x - p[0], wy = y - p[1];
  const double len2 = ux * ux + uy * uy;
  const double s = std::clamp((wx * ux + wy * uy) / len2, 0.0, 1.0);
  return std::hypot(wx - s * ux, wy - s * uy);
}

double box_distance(const Box& b, std::span<const double> y) {
  bool inside = true;
  double inner = 1e300, outer2 = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double lo = b.lower[j] - y[j];
    const double hi = y[j] - b.upper[j];
    if (lo > 0.0 || hi > 0.0) inside = false;
    const double e = std::max({lo, hi, 0.0});
    outer2 += e * e;
    inner = std::min(inner, std::min(-lo, -hi));
  }
  return inside ? inner : std::sqrt(outer2);
}

}  // namespace

TorusSet TorusSet::box(std::vector<double> lower, std::vector<double> upper) {
  const int d = static_cast<int>(lower.size());
  check_dimension(d);
  if (upper.size() != lower.size()) throw ConfigError("box corners differ in dimension");
  for (int j = 0; j < d; ++j) {
    if (!(0.0 <= lower[j] && lower[j] < upper[j] && upper[j] <= 1.0))
      throw ConfigError("box needs 0 <= lower < upper <= 1 on every axis");
    if (!(upper[j] - lower[j] < 1.0)) throw ConfigError("box width must be below 1 on every axis");
  }
  TorusSet s;
  s.d_ = d;
  s.anchor_.resize(d);
  for (int j = 0; j < d; ++j) s.anchor_[j] = 0.5 * (lower[j] + upper[j]);
  s.shape_ = Box{std::move(lower), std::move(upper)};
  return s;
}

TorusSet TorusSet::ball(std::vector<double> center, double radius) {
  const int d = static_cast<int>(center.size());
  check_dimension(d);
  if (!(radius > 0.0 && radius < 0.5)) throw ConfigError("ball radius must lie in (0, 1/2)");
  TorusSet s;
  s.d_ = d;
  s.anchor_ = center;
  s.shape_ = Ball{std::move(center), radius};
  return s;
}

TorusSet TorusSet::polygon(std::vector<std::array<double, 2>> vertices, double epsilon) {
  if (vertices.size() < 3) throw ConfigError("polygon needs at least three vertices");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("polygon epsilon must lie in (0, 1)");
  Polygon poly{std::move(vertices), epsilon};
  if (polygon_area(poly) < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly.vertices[i];
    const auto& b = poly.vertices[(i + 1) % n];
    const auto& c = poly.vertices[(i + 2) % n];
    const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (!(cross > 0.0)) throw ConfigError("polygon must be strictly convex");
  }
  if (!(polygon_diameter(poly) < 1.0 - epsilon))
    throw ConfigError("polygon diameter must be below 1 - epsilon");
  TorusSet s;
  s.d_ = 2;
  s.anchor_.assign(2, 0.0);
  for (int j = 0; j < 2; ++j) {
    double lo = 1e300, hi = -1e300;
    for (const auto& v : poly.vertices) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
    }
    s.anchor_[j] = 0.5 * (lo + hi);
  }
  s.shape_ = std::move(poly);
  return s;
}

TorusSet::Kind TorusSet::kind() const {
  switch (shape_.index()) {
    case 0:
      return Kind::Box;
    case 1:
      return Kind::Ball;
    default:
      return Kind::Polygon;
  }
}

double TorusSet::measure() const {
  switch (kind()) {
    case Kind::Box: {
      double v = 1.0;
      for (int j = 0; j < d_; ++j) v *= as_box().upper[j] - as_box().lower[j];
      return v;
    }
    case Kind::Ball: {
      const double r = as_ball().radius;
      return d_ == 1 ? 2.0 * r : (d_ == 2 ? kPi * r * r : 4.0 / 3.0 * kPi * r * r * r);
    }
    default:
      return polygon_area(as_polygon());
  }
}

double TorusSet::diameter() const {
  switch (kind()) {
    case Kind::Box: {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) {
        const double w = as_box().upper[j] - as_box().lower[j];
        s += w * w;
      }
      return std::sqrt(s);
    }
    case Kind::Ball:
      return 2.0 * as_ball().radius;
    default:
      return polygon_diameter(as_polygon());
  }
}

std::vector<double> TorusSet::nearest_image(std::span<const double> x) const {
  std::vector<double> y(d_);
  for (int j = 0; j < d_; ++j) {
    const double off = x[j] - anchor_[j];
    y[j] = anchor_[j] + off - std::round(off);
  }
  return y;
}

bool TorusSet::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw ConfigError("point dimension does not match set");
  switch (kind()) {
    case Kind::Box: {
      // The box sits inside [0,1]^d, so reducing x to [0,1) is exact.
      const Box& b = as_box();
      for (int j = 0; j < d_; ++j) {
        const double v = wrap01(x[j]);
        if (!(b.lower[j] <= v && v < b.upper[j])) return false;
      }
      return true;
    }
    case Kind::Ball: {
      const Ball& b = as_ball();
      double s = 0.0;
      for (int j = 0; j < d_; ++j) {
        double off = x[j] - b.center[j];
        off -= std::round(off);
        s += off * off;
      }
      return s <= b.radius * b.radius;
    }
    default: {
      const auto y = nearest_image(x);
      const auto& v = as_polygon().vertices;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        if ((q[0] - p[0]) * (y[1] - p[1]) - (q[1] - p[1]) * (y[0] - p[0]) < 0.0) return false;
      }
      return true;
    }
  }
}

double TorusSet::boundary_distance(std::span<const double> x) const {
  const auto y0 = nearest_image(x);
  double best = 1e300;
  std::vector<double> y(d_);
  for_each_shift(d_, [&](std::span<const double> n) {
    for (int j = 0; j < d_; ++j) y[j] = y0[j] + n[j];
    double dist = 0.0;
    switch (kind()) {
      case Kind::Box:
        dist = box_distance(as_box(), y);
        break;
      case Kind::Ball: {
        double s = 0.0;
        for (int j = 0; j < d_; ++j) s += (y[j] - as_ball().center[j]) * (y[j] - as_ball().center[j]);
        dist = std::abs(std::sqrt(s) - as_ball().radius);
        break;
      }
      default: {
        const auto& v = as_polygon().vertices;
        dist = 1e300;
        for (std::size_t i = 0; i < v.size(); ++i)
          dist = std::min(dist, segment_distance(v[i], v[(i + 1) % v.size()], y[0], y[1]));
      }
    }
    best = std::min(best, dist);
  });
  return best;
}

Complex TorusSet::fourier_transform(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != d_) throw ConfigError("frequency dimension does not match set");
  switch (kind()) {
    case Kind::Box: {
      // (e^{-2 pi i xi a} - e^{-2 pi i xi b}) / (2 pi i xi), written without cancellation.
      Complex v = 1.0;
      for (int j = 0; j < d_; ++j) {
        const double a = as_box().lower[j], b = as_box().upper[j];
        const double z = kPi * xi[j] * (b - a);
        const double sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
        v *= (b - a) * sinc * std::polar(1.0, -kPi * xi[j] * (a + b));
      }
      return v;
    }
    case Kind::Ball: {
      const Ball& b = as_ball();
      double q2 = 0.0, phase = 0.0;
      for (int j = 0; j < d_; ++j) {
        q2 += xi[j] * xi[j];
        phase += xi[j] * b.center[j];
      }
      const double q = std::sqrt(q2);
      const double z = 2.0 * kPi * b.radius * q;
      double mag;
      if (z < 1e-6) {
        mag = measure() * (1.0 - z * z / (2.0 * (d_ + 2)));
      } else if (d_ == 1) {
        mag = std::sin(z) / (kPi * q);
      } else if (d_ == 2) {
        mag = b.radius * ::j1(z) / q;
      } else {
        mag = (std::sin(z) - z * std::cos(z)) / (2.0 * kPi * kPi * q * q * q);
      }
      return mag * std::polar(1.0, -2.0 * kPi * phase);
    }
    default:
      return polygon_fourier_transform(as_polygon(), xi);
  }
}

Complex TorusSet::fourier_coefficient(std::span<const int> k) const {
  std::array<double, 3> xi{};
  for (std::size_t j = 0; j < k.size() && j < 3; ++j) xi[j] = k[j];
  return fourier_transform(std::span<const double>(xi.data(), k.size()));
}

std::string TorusSet::membership_convention() const {
  switch (kind()) {
    case Kind::Box:
      return "half-open [a,b) per axis";
    case Kind::Ball:
      return "closed ball";
    default:
      return "closed polygon";
  }
}

std::string TorusSet::describe() const { return to_json().dump(); }

nlohmann::json TorusSet::to_json() const {
  switch (kind()) {
    case Kind::Box:
      return {{"type", "box"}, {"lower", as_box().lower}, {"upper", as_box().upper}};
    case Kind::Ball:
      return {{"type", "ball"}, {"center", as_ball().center}, {"radius", as_ball().radius}};
    default: {
      nlohmann::json v = nlohmann::json::array();
      for (const auto& p : as_polygon().vertices) v.push_back({p[0], p[1]});
      return {{"type", "polytope"}, {"vertices", v}, {"epsilon", as_polygon().epsilon}};
    }
  }
}

TorusSet TorusSet::from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "box")
      return box(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
    if (type == "ball")
      return ball(j.at("center").get<std::vector<double>>(), j.at("radius").get<double>());
    if (type == "polytope" || type == "polygon") {
      if (!j.contains("epsilon")) throw ConfigError("polytope needs an explicit epsilon");
      std::vector<std::array<double, 2>> v;
      for (const auto& p : j.at("vertices")) {
        if (p.size() != 2) throw ConfigError("only planar polytopes (polygons) are supported");
        v.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return polygon(std::move(v), j.at("epsilon").get<double>());
    }
    throw ConfigError("unknown set type '" + type + "' (expected box, ball or polytope)");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed set description: ") + e.what());
  }
}

}  // namespace dforge
