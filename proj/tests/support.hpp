#pragma once

#include <cmath>
#include <map>

#include "dforge/kernel.hpp"

namespace dforge::testing {

inline constexpr double kPi = 3.14159265358979323846;

// One default kernel per dimension and test process; built on first use.
inline const KernelTable& kernel(int d) {
  static std::map<int, KernelTable> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    KernelConfig kc;
    kc.dimension = d;
    it = cache.emplace(d, KernelTable::build(kc)).first;
  }
  return it->second;
}

}  // namespace dforge::testing
