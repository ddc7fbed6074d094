#include "bridgelab/contrast.hpp"

#include <cmath>

#include "bridgelab/errors.hpp"

namespace bridgelab {

Contrast::Contrast(Dataset data, PenaltySpec penalty)
    : Contrast(std::move(data), std::move(penalty), Box{}) {}

Contrast::Contrast(Dataset data, PenaltySpec penalty, Box box)
    : data_(std::move(data)), penalty_(std::move(penalty)), box_(std::move(box)) {
  if (data_.X.rows() == 0) throw InvalidInput("contrast needs at least one observation");
  if (data_.Y.size() != data_.X.rows()) throw InvalidInput("responses and design differ in length");
  if (data_.p() != data_.truth.p()) throw InvalidInput("design and true parameter differ in dimension");
  if (!data_.X.allFinite() || !data_.Y.allFinite()) throw InvalidInput("non-finite data");
  penalty_.validate();
  scalar_ = penalty_.at(data_.n());
  if (box_.lo.size() == 0) box_ = Box::default_for(data_.p());
  box_.validate();
  if (box_.dim() != data_.p()) throw InvalidInput("box dimension does not match the design");
}

double Contrast::residual_sum_of_squares(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != p()) throw InvalidInput("theta has the wrong dimension");
  double rss = 0.0;
  for (Eigen::Index i = 0; i < data_.X.rows(); ++i) {
    const double r = data_.Y[i] - data_.X.row(i).dot(theta);
    rss += r * r;
  }
  return rss;
}

double contrast_value(const Contrast& c, const Vector& theta) {
  return c.residual_sum_of_squares(theta) + penalty_total(c.scalar_penalty(), theta);
}

namespace {

void require_in_box(const Contrast& c, const Vector& theta, const char* what) {
  if (!c.box().contains(theta)) throw DomainError(std::string(what) + " lies outside the parameter box");
}

// eps_i = Y_i - theta0' X_i, taken from the stored simulation noise when
// theta0 is the true parameter.
Vector centered_residuals(const Contrast& c, const Vector& theta0, bool& estimated) {
  const Dataset& d = c.data();
  if (d.noise && theta0 == d.truth.theta()) {
    estimated = false;
    return *d.noise;
  }
  estimated = true;
  return d.Y - d.X * theta0;
}

}  // namespace

double local_field(const Contrast& c, const Vector& theta0, const Vector& u, double rate) {
  if (!(rate > 0.0)) throw InvalidInput("local field rate must be positive");
  if (u.size() != theta0.size()) throw InvalidInput("u and theta0 differ in dimension");
  const Vector moved = theta0 + rate * u;
  require_in_box(c, theta0, "theta0");
  require_in_box(c, moved, "theta0 + rate u");
  return contrast_value(c, moved) - contrast_value(c, theta0);
}

double local_field(const Contrast& c, const Vector& theta0, const Vector& u) {
  return local_field(c, theta0, u, 1.0 / std::sqrt(static_cast<double>(c.n())));
}

double PlaqParts::reconstruct(const Vector& u) const {
  return delta.dot(u) + 0.5 * u.dot(gamma0 * u) + remainder(u);
}

PlaqParts plaq_decompose(const Contrast& c, const Vector& theta0, const Matrix& C0) {
  const auto p = static_cast<Eigen::Index>(c.p());
  if (theta0.size() != p) throw InvalidInput("theta0 has the wrong dimension");
  if (C0.rows() != p || C0.cols() != p) throw InvalidInput("C0 must be p x p");
  const Dataset& d = c.data();
  const double n = static_cast<double>(c.n());
  const double root_n = std::sqrt(n);

  PlaqParts parts;
  const Vector eps = centered_residuals(c, theta0, parts.noise_estimated);
  parts.delta = -(2.0 / root_n) * (d.X.transpose() * eps);
  parts.gamma0 = 2.0 * C0;
  const Matrix drift = (d.X.transpose() * d.X) / n - C0;
  parts.remainder = [drift, theta0, pen = c.scalar_penalty(), root_n](const Vector& u) {
    double r = u.dot(drift * u);
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      r += pen.value(theta0[j] + u[j] / root_n) - pen.value(theta0[j]);
    }
    return r;
  };
  return parts;
}

double yn_field(const Contrast& c, const Vector& theta, const Vector& theta0) {
  require_in_box(c, theta, "theta");
  require_in_box(c, theta0, "theta0");
  return -(contrast_value(c, theta) - contrast_value(c, theta0)) / static_cast<double>(c.n());
}

ProfileField profile_field(const Contrast& c, const Vector& u, const Vector& rho,
                           const Vector& theta0) {
  const Dataset& d = c.data();
  const auto p0 = static_cast<Eigen::Index>(d.p0());
  const auto p1 = static_cast<Eigen::Index>(d.p1());
  if (u.size() != p0 || rho.size() != p1 || theta0.size() != p0 + p1) {
    throw InvalidInput("profile field: u, rho or theta0 has the wrong dimension");
  }
  if (!theta0.head(p0).isZero(0.0)) throw InvalidInput("profile field needs theta0 = (0, rho0)");
  const double root_n = std::sqrt(static_cast<double>(c.n()));

  Vector at_u(p0 + p1), at_zero(p0 + p1);
  at_u << u / root_n, rho;
  at_zero << Vector::Zero(p0), rho;
  require_in_box(c, at_u, "(u/sqrt n, rho)");
  require_in_box(c, at_zero, "(0, rho)");

  bool estimated = false;
  const Vector eps = centered_residuals(c, theta0, estimated);
  const Matrix Xz = d.X.leftCols(p0);
  const Matrix Xr = d.X.rightCols(p1);
  const Vector shifted = eps - Xr * (rho - theta0.tail(p1));
  const Vector S = (2.0 / root_n) * (Xz.transpose() * shifted);
  const Matrix D = (Xz.transpose() * Xz) / static_cast<double>(c.n());

  ProfileField f;
  f.value = contrast_value(c, at_u) - contrast_value(c, at_zero);
  f.linear = -S.dot(u);
  f.quadratic = u.dot(D * u);
  for (Eigen::Index k = 0; k < p0; ++k) f.penalty += c.scalar_penalty().value(u[k] / root_n);
  return f;
}

}  // namespace bridgelab
