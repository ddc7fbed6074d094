#pragma once

#include <functional>

#include "bridgelab/box.hpp"
#include "bridgelab/linalg.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/penalty.hpp"

namespace bridgelab {

// Z_n(theta) = sum_i (Y_i - theta' X_i)^2 + sum_j pen_n(theta_j).
class Contrast {
 public:
  Contrast(Dataset data, PenaltySpec penalty);
  Contrast(Dataset data, PenaltySpec penalty, Box box);

  const Dataset& data() const { return data_; }
  const PenaltySpec& penalty() const { return penalty_; }
  const ScalarPenalty& scalar_penalty() const { return scalar_; }
  const Box& box() const { return box_; }
  std::size_t n() const { return data_.n(); }
  std::size_t p() const { return data_.p(); }

  double residual_sum_of_squares(const Vector& theta) const;

 private:
  Dataset data_;
  PenaltySpec penalty_;
  ScalarPenalty scalar_;
  Box box_;
};

double contrast_value(const Contrast& c, const Vector& theta);

// M_n(u; theta0) = Z_n(theta0 + rate u) - Z_n(theta0). Throws DomainError when
// theta0 + rate u leaves the box.
double local_field(const Contrast& c, const Vector& theta0, const Vector& u, double rate);
double local_field(const Contrast& c, const Vector& theta0, const Vector& u);  // rate n^-1/2

// Linear + quadratic + remainder split of the localized contrast at rate
// n^-1/2:  M_n(u) = delta' u + 1/2 u' gamma0 u + remainder(u).
struct PlaqParts {
  Vector delta;   // -(2/sqrt n) sum eps_i X_i
  Matrix gamma0;  // 2 C0
  std::function<double(const Vector&)> remainder;
  // True when delta was built from residuals rather than the simulated noise.
  bool noise_estimated = false;

  double reconstruct(const Vector& u) const;
};

// Uses the stored simulation noise when theta0 is the true parameter; falls
// back to residuals Y - theta0' X otherwise (flagged as estimated).
PlaqParts plaq_decompose(const Contrast& c, const Vector& theta0, const Matrix& C0);

// Y_n(theta; theta0) = -(Z_n(theta) - Z_n(theta0)) / n.
double yn_field(const Contrast& c, const Vector& theta, const Vector& theta0);

struct ProfileField {
  double value = 0.0;
  double linear = 0.0;     // -S_n^rho . u
  double quadratic = 0.0;  // D_n[u, u]
  double penalty = 0.0;    // sum_k pen_n(u_k / sqrt n)

  double reconstruct() const { return linear + quadratic + penalty; }
};

// Z_n(u/sqrt n, rho) - Z_n(0, rho) for theta0 = (0, rho0), with the diagnostic
// split S_n^rho = (2/sqrt n) sum {eps_i - (rho - rho0)' X_i^(rho)} X_i^(z).
ProfileField profile_field(const Contrast& c, const Vector& u, const Vector& rho,
                           const Vector& theta0);

}  // namespace bridgelab
