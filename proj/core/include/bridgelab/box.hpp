#pragma once

#include <cstddef>

#include "bridgelab/linalg.hpp"

namespace bridgelab {

// Compact parameter space: a product of closed intervals [lo_j, hi_j].
struct Box {
  Vector lo;
  Vector hi;

  static constexpr double kDefaultHalfWidth = 10.0;

  static Box uniform(std::size_t p, double lo, double hi);
  static Box default_for(std::size_t p) { return uniform(p, -kDefaultHalfWidth, kDefaultHalfWidth); }

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  void validate() const;
  bool contains(const Vector& theta) const;
  bool strictly_contains(const Vector& theta) const;
  bool on_boundary(const Vector& theta) const { return contains(theta) && !strictly_contains(theta); }
  Vector clamp(const Vector& theta) const;

  friend bool operator==(const Box& a, const Box& b) {
    return a.lo.size() == b.lo.size() && a.lo == b.lo && a.hi == b.hi;
  }
};

}  // namespace bridgelab
