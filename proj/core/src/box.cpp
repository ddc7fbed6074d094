#include "bridgelab/box.hpp"

#include <cmath>

#include "bridgelab/errors.hpp"

namespace bridgelab {

Box Box::uniform(std::size_t p, double lo, double hi) {
  Box b{Vector::Constant(static_cast<Eigen::Index>(p), lo),
        Vector::Constant(static_cast<Eigen::Index>(p), hi)};
  b.validate();
  return b;
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0) throw InvalidInput("box bounds must have equal, nonzero length");
  for (Eigen::Index j = 0; j < lo.size(); ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || !(lo[j] < hi[j])) {
      throw InvalidInput("box needs finite lo_j < hi_j (coordinate " + std::to_string(j) + ")");
    }
  }
}

bool Box::contains(const Vector& theta) const {
  if (theta.size() != lo.size()) return false;
  return (theta.array() >= lo.array()).all() && (theta.array() <= hi.array()).all();
}

bool Box::strictly_contains(const Vector& theta) const {
  if (theta.size() != lo.size()) return false;
  return (theta.array() > lo.array()).all() && (theta.array() < hi.array()).all();
}

Vector Box::clamp(const Vector& theta) const { return theta.cwiseMax(lo).cwiseMin(hi); }

}  // namespace bridgelab
