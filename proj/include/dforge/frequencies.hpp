#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace dforge {

// Integer frequencies k in Z^d inside a Euclidean ball. Enumeration walks the
// bounding box [-ceil(R), ceil(R)]^d in lexicographic order and filters by norm.
class FrequencySet {
 public:
  enum class Bound { Open, Closed };  // |k| < R or |k| <= R

  FrequencySet() = default;
  FrequencySet(int d, double radius, bool include_zero, Bound bound = Bound::Open);

  int dimension() const { return d_; }
  double radius() const { return radius_; }
  std::size_t size() const { return d_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(d_); }
  std::span<const int> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double norm(std::size_t i) const;
  // Position of k in the enumeration, or size() if absent.
  std::size_t find(std::span<const int> k) const;

 private:
  int d_ = 0;
  double radius_ = 0.0;
  int box_ = 0;
  bool include_zero_ = false;
  std::vector<int> flat_;
  std::vector<long> lookup_;  // dense box index -> position, -1 if filtered
};

// Visits the same frequencies as FrequencySet without materializing them.
template <class Fn>
void for_each_frequency(int d, double radius, bool include_zero, FrequencySet::Bound bound, Fn&& fn) {
  const int box = static_cast<int>(std::ceil(radius));
  const double r2 = radius * radius;
  int k[3] = {0, 0, 0};
  auto accept = [&](long n2) {
    if (n2 == 0 && !include_zero) return false;
    const double v = static_cast<double>(n2);
    return bound == FrequencySet::Bound::Open ? v < r2 : v <= r2;
  };
  if (d == 1) {
    for (k[0] = -box; k[0] <= box; ++k[0])
      if (accept(long(k[0]) * k[0])) fn(std::span<const int>(k, 1));
  } else if (d == 2) {
    for (k[0] = -box; k[0] <= box; ++k[0])
      for (k[1] = -box; k[1] <= box; ++k[1])
        if (accept(long(k[0]) * k[0] + long(k[1]) * k[1])) fn(std::span<const int>(k, 2));
  } else {
    for (k[0] = -box; k[0] <= box; ++k[0])
      for (k[1] = -box; k[1] <= box; ++k[1])
        for (k[2] = -box; k[2] <= box; ++k[2])
          if (accept(long(k[0]) * k[0] + long(k[1]) * k[1] + long(k[2]) * k[2]))
            fn(std::span<const int>(k, 3));
  }
}

}  // namespace dforge
