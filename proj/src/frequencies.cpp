#include "dforge/frequencies.hpp"

#include "dforge/error.hpp"

namespace dforge {

FrequencySet::FrequencySet(int d, double radius, bool include_zero, Bound bound)
    : d_(d), radius_(radius), include_zero_(include_zero) {
  if (d < 1 || d > 3) throw ConfigError("FrequencySet: dimension must be 1, 2 or 3");
  if (!(radius >= 0.0)) throw ConfigError("FrequencySet: negative radius");
  box_ = static_cast<int>(std::ceil(radius));
  const std::size_t side = static_cast<std::size_t>(2 * box_ + 1);
  std::size_t dense = 1;
  for (int i = 0; i < d; ++i) dense *= side;
  lookup_.assign(dense, -1);
  for_each_frequency(d, radius, include_zero, bound, [&](std::span<const int> k) {
    std::size_t idx = 0;
    for (int v : k) idx = idx * side + static_cast<std::size_t>(v + box_);
    lookup_[idx] = static_cast<long>(size());
    flat_.insert(flat_.end(), k.begin(), k.end());
  });
}

double FrequencySet::norm(std::size_t i) const {
  double s = 0.0;
  for (int v : (*this)[i]) s += double(v) * v;
  return std::sqrt(s);
}

std::size_t FrequencySet::find(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != d_) return size();
  const std::size_t side = static_cast<std::size_t>(2 * box_ + 1);
  std::size_t idx = 0;
  for (int v : k) {
    if (v < -box_ || v > box_) return size();
    idx = idx * side + static_cast<std::size_t>(v + box_);
  }
  const long pos = lookup_[idx];
  return pos < 0 ? size() : static_cast<std::size_t>(pos);
}

}  // namespace dforge
