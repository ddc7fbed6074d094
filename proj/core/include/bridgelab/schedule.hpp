#pragma once

#include <cmath>
#include <cstddef>

namespace bridgelab {

// A positive power-law sequence c * n^e.
struct PowerSchedule {
  double c = 1.0;
  double e = 0.0;

  double at(double n) const { return c * std::pow(n, e); }
  double at(std::size_t n) const { return at(static_cast<double>(n)); }

  friend bool operator==(const PowerSchedule&, const PowerSchedule&) = default;
};

}  // namespace bridgelab
