#pragma once

#include <vector>

namespace dforge {

// Piecewise cubic Hermite interpolant on a uniform grid with Fritsch-Carlson
// slopes. Monotone data stays monotone and no overshoot is introduced.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(double origin, double step, std::vector<double> values);

  // Evaluates at x; x is clamped to the tabulated range.
  double operator()(double x) const;

  double origin() const { return origin_; }
  double step() const { return step_; }
  double back() const { return origin_ + step_ * static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

 private:
  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace dforge
