#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bridgelab/linalg.hpp"
#include "bridgelab/schedule.hpp"

namespace bridgelab {

using TuningSchedule = PowerSchedule;

enum class PenaltyFamily { none, bridge, scad, selo };

std::string_view to_string(PenaltyFamily f);

// The penalty evaluated at a fixed sample size. All families are even,
// nonnegative and vanish at 0.
//
//   bridge:  lambda |t|^gamma
//   scad:    n lambda |t|                                  |t| <= lambda
//            -n (t^2 - 2 a lambda |t| + lambda^2) / (2(a-1))  lambda < |t| <= a lambda
//            n (a+1) lambda^2 / 2                          |t| > a lambda
//   selo:    (2 n lambda / log 2) log(|t| / (|t| + tau) + 1)
struct ScalarPenalty {
  PenaltyFamily family = PenaltyFamily::none;
  double lambda = 0.0;
  double n = 1.0;
  double gamma = 1.0;
  double a = 3.7;
  double tau = 1.0;

  static ScalarPenalty zero() { return {}; }
  static ScalarPenalty bridge(double lambda, double gamma);

  double value(double t) const;

  bool is_zero() const { return family == PenaltyFamily::none || lambda == 0.0; }
};

// A penalty family together with its tuning schedule lambda_n = c n^e (and,
// for SELO, tau_n = c_tau n^e_tau).
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::none;
  TuningSchedule schedule{1.0, 0.0};
  double gamma = 1.0;
  double a = 3.7;
  TuningSchedule tau{1.0, -1.5};

  static PenaltySpec none();
  static PenaltySpec bridge(double gamma, TuningSchedule schedule);
  static PenaltySpec scad(double a, TuningSchedule schedule);
  static PenaltySpec selo(TuningSchedule tau, TuningSchedule schedule);

  // Throws InvalidSpec on out-of-range parameters.
  void validate() const;

  ScalarPenalty at(std::size_t n) const;
  double lambda_at(std::size_t n) const { return schedule.at(n); }

  friend bool operator==(const PenaltySpec&, const PenaltySpec&) = default;
};

double penalty_value(const PenaltySpec& pen, std::size_t n, double t);

double penalty_total(const PenaltySpec& pen, std::size_t n, const Vector& theta);
double penalty_total(const ScalarPenalty& pen, const Vector& theta);

// Objective of the scalar subproblem c (x - b)^2 + pen(x).
double scalar_objective(const ScalarPenalty& pen, double c, double b, double x);

// Exact global minimizer of c (x - b)^2 + pen(x) over the real line. Ties go
// to the smaller |x|, then to the negative value. Returns literal 0 whenever
// 0 is a minimizer.
double scalar_prox(const ScalarPenalty& pen, double c, double b);
double scalar_prox(const PenaltySpec& pen, std::size_t n, double c, double b);

// Same subproblem restricted to [lo, hi] (lo < hi).
double scalar_prox_box(const ScalarPenalty& pen, double c, double b, double lo, double hi);

// Every point that can be a minimizer of the scalar subproblem on some
// interval: 0, and the local minima of the smooth branches between 0 and b.
std::vector<double> scalar_prox_candidates(const ScalarPenalty& pen, double c, double b);

// --- Condition checkers --------------------------------------------------

struct ProbeSeries {
  std::string label;
  std::vector<double> x;       // probe coordinate (r, or n)
  std::vector<double> values;  // finite, nonnegative
};

struct PenaltyConditionReport {
  std::string id;
  std::string description;
  std::vector<std::size_t> n_grid;
  std::vector<ProbeSeries> series;
  bool satisfied = false;
  std::optional<double> fitted_power;  // f(r) ~ r^s
  std::optional<double> fit_residual;  // max |log residual| of the power fit
  std::optional<int> kappa;            // smallest bounded kappa
  std::vector<std::string> notes;
};

// inf_{|u| >= r} sum_k pen_n(u_k / sqrt n) over u in R^p0, computed on the
// sphere |u| = r (the penalties are nondecreasing in |t|) by a pairwise
// exchange search started from the best of the axis and diagonal points.
double sphere_penalty_infimum(const ScalarPenalty& pen, std::size_t p0, double r);

// Divergence condition: inf_{|u|>=r} sum pen_n(u_k/sqrt n) >= q_n f(r) with
// f(r) -> infinity. Reports the scaled infimum per n over the r-grid. When
// `q_n` is absent it defaults to pen_n(1/sqrt n), which is lambda_n n^-gamma/2
// for the bridge.
PenaltyConditionReport check_divergence_condition(const PenaltySpec& pen, std::size_t p0,
                                                  std::span<const std::size_t> n_grid,
                                                  std::span<const double> r_grid,
                                                  std::optional<TuningSchedule> q_n = std::nullopt);

// Growth bound sup_n n^-(1/2+beta) pen_n(a) < inf, and local increments
// |pen_n(a + b/sqrt n) - pen_n(a)| <= c_{a,b} |b|^kappa, kappa in {1, 2}.
// Returns {growth report, increment report}.
std::pair<PenaltyConditionReport, PenaltyConditionReport> check_smooth_conditions(
    const PenaltySpec& pen, std::span<const std::size_t> n_grid, std::span<const double> a_probes,
    std::span<const double> b_probes, double beta);

}  // namespace bridgelab
