#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "bridgelab/box.hpp"
#include "bridgelab/linalg.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/penalty.hpp"
#include "bridgelab/rng.hpp"

namespace bridgelab {

enum class RegimeTag { standard, sparse_normal, sparse_slow, pseudo_true };

std::string_view to_string(RegimeTag t);

// Asymptotic regime of the bridge estimator under lambda_n = c n^e.
struct Regime {
  RegimeTag tag = RegimeTag::standard;
  double lambda0 = 0.0;
  double gamma = 1.0;
  TuningSchedule schedule;
  // Limits of lambda_n / n^k for k = (1 ^ gamma)/2, gamma/2, 1/2, 1; each is
  // 0, c, or +inf.
  double limit_min_rate = 0.0;
  double limit_gamma_rate = 0.0;
  double limit_root_n = 0.0;
  double limit_n = 0.0;

  friend bool operator==(const Regime&, const Regime&) = default;
};

// Throws UnsupportedRegime for e > 1, and for gamma >= 1 with 1/2 < e < 1
// (consistent, but no limit law is available there).
Regime regime_classify(double gamma, const TuningSchedule& schedule);

// Rates of the mixed-rates decomposition M_n(u, v) = alpha_n f_n(u) + beta_n g_n(u, v)
// for the least-squares contrast: s_n = 1/n, eps_n = n^-1/2,
// alpha_n = lambda_n n^-gamma/2, beta_n = 1.
struct RateDescriptors {
  PowerSchedule s_n{1.0, -1.0};
  PowerSchedule eps_n{1.0, -0.5};
  PowerSchedule alpha_n{1.0, 0.0};
  PowerSchedule beta_n{1.0, 0.0};
  // beta_n = o(alpha_n)
  bool mixed_rates = false;
};

RateDescriptors rate_descriptors(const Regime& regime);

struct LimitLaw {
  Regime regime;
  double sigma2 = 1.0;
  Matrix C0;
  Vector theta0;
  std::size_t p0 = 0;
  RateDescriptors rates;
  // sparse-normal: Upsilon, bias = -lambda0 B0^-1 Upsilon, cov = sigma^2 B0^-1.
  // sparse-slow: Upsilon and drift = -B0^-1 Upsilon of (n / lambda_n)(rho_hat - rho0).
  Vector upsilon;
  Vector bias;
  Matrix cov;
  Vector drift;
  // pseudo-true: argmin (theta - theta0)' C0 (theta - theta0) + lambda0 sum |theta_j|^gamma.
  Vector pseudo_true;
  std::vector<bool> pseudo_true_zero;
};

LimitLaw build_limit_law(const Regime& regime, const Matrix& C0, double sigma2,
                         const TrueParameter& truth, const Box& box);

struct LimitFieldParams {
  double gamma = 1.0;
  double lambda0 = 0.0;
  Matrix C0;
  Vector theta0;
};

// V0(u) = -2 W'u + C0[u, u] + penalty part, with the penalty part by branch:
//   gamma > 1:  gamma lambda0 sum u_j sgn(theta0_j) |theta0_j|^(gamma-1)
//   gamma = 1:  lambda0 sum {u_j sgn(theta0_j) 1(theta0_j != 0) + |u_j| 1(theta0_j = 0)}
//   gamma < 1:  lambda0 sum |u_j|^gamma 1(theta0_j = 0)
double limit_field_v0(const LimitFieldParams& params, const Vector& W, const Vector& u);

// Minimizer of V0 for a realized W.
Vector limit_argmin(const LimitFieldParams& params, const Vector& W);

// R draws of argmin V0 with W ~ N(0, sigma^2 C0), one row per draw. Draw i
// uses a seed derived from (seed, i), so any split of the work reproduces the
// same rows.
Matrix sample_limit_argmin(const LimitFieldParams& params, double sigma2, std::size_t R, Seed seed);
Matrix sample_limit_argmin(const LimitLaw& law, std::size_t R, Seed seed);

struct SparseLimit {
  Vector upsilon;
  Vector bias;
  Matrix cov;
};

// Upsilon_l = (gamma/2) sgn(rho0_l) |rho0_l|^(gamma-1), bias = -lambda0 B0^-1 Upsilon,
// cov = sigma^2 B0^-1. Requires gamma in (0, 1) and B0 positive definite.
SparseLimit sparse_limit_params(double gamma, double lambda0, const Matrix& B0, double sigma2,
                                const Vector& rho0);

struct PseudoTrue {
  Vector theta;
  std::vector<bool> exact_zero;  // per coordinate
};

PseudoTrue pseudo_true(const Matrix& C0, double lambda0, double gamma, const Vector& theta0,
                       const Box& box);

}  // namespace bridgelab
