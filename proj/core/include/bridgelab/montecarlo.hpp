#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/asymptotics.hpp"
#include "bridgelab/box.hpp"
#include "bridgelab/diagnostics.hpp"
#include "bridgelab/linalg.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/penalty.hpp"
#include "bridgelab/rng.hpp"
#include "bridgelab/solver.hpp"

namespace bridgelab {

struct MCConfig {
  TrueParameter truth{1, Vector::Ones(1)};
  DesignSpec design;
  NoiseSpec noise;
  PenaltySpec penalty;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 100;
  Seed seed = 1;
  std::optional<Box> box;  // default [-10, 10]^p
  SolverOptions solver;
  std::vector<double> r_grid;
  std::vector<double> q_list{2.0, 4.0};
  std::vector<double> L_list{2.0, 4.0};

  static constexpr std::size_t kMinReplications = 100;

  // Throws InvalidSpec.
  void validate() const;
  Box effective_box() const;

  friend bool operator==(const MCConfig& a, const MCConfig& b) {
    return a.truth == b.truth && a.design == b.design && a.noise == b.noise &&
           a.penalty == b.penalty && a.n_grid == b.n_grid && a.replications == b.replications &&
           a.seed == b.seed && a.box == b.box && a.solver == b.solver && a.r_grid == b.r_grid &&
           a.q_list == b.q_list && a.L_list == b.L_list;
  }
};

struct ReplicationRecord {
  std::size_t n = 0;
  std::size_t rep = 0;
  Seed seed = 0;
  Vector theta;
  std::vector<bool> exact_zero;  // zero block
  double objective = 0.0;
  bool converged = false;
  bool on_boundary = false;
  Vector u;  // sqrt(n) z_hat
  Vector v;  // sqrt(n) (rho_hat - rho0)
};

struct ReplicationSet {
  std::vector<std::size_t> n_grid;
  std::size_t replications = 0;
  std::size_t p0 = 0;
  std::size_t p1 = 0;
  Vector theta0;
  // Regime of the campaign's penalty schedule; empty for non-bridge penalties
  // or unclassifiable schedules.
  std::optional<Regime> regime;
  std::vector<double> lambda;  // lambda_n per n
  std::vector<Matrix> designs;  // frozen design per n
  std::vector<std::vector<ReplicationRecord>> by_n;
  std::vector<std::size_t> nonconverged;
  std::vector<std::size_t> boundary_hits;
  std::vector<std::string> warnings;
};

// threads = 0 picks the hardware concurrency.
ReplicationSet run_replications(const MCConfig& cfg, std::size_t threads = 1);

Seed replication_seed(Seed master, std::size_t n, std::size_t rep);
Seed design_seed(Seed master, std::size_t n);

struct TailCurve {
  std::size_t n = 0;
  std::vector<double> r;
  std::vector<double> p_hat;
  std::vector<double> se;
  std::vector<bool> informative;   // p_hat >= 10 / R
  std::vector<std::vector<double>> rL_p_hat;  // [L index][r index]
  std::optional<LineFit> slope_fit;  // log p_hat on log r, informative points
  bool all_mass_at_zero = false;
  std::vector<double> pldi_max;  // per L: max of r^L p_hat over the informative range, 0 if empty
};

struct TailReport {
  std::vector<double> L;
  std::vector<TailCurve> curves;
  // Per L: the PLDI sequence over n and its boundedness verdict.
  std::vector<std::vector<double>> pldi_by_n;
  std::vector<Boundedness> pldi_verdict;
  // Largest L whose r^L p_hat stayed bounded over the n-grid.
  std::optional<double> largest_bounded_L;
};

TailCurve tail_curve_from_norms(std::size_t n, const std::vector<double>& norms,
                                const std::vector<double>& r_grid, const std::vector<double>& L_list);
TailReport tail_curve(const ReplicationSet& set, const std::vector<double>& r_grid,
                      const std::vector<double>& L_list);

struct SelectionPoint {
  std::size_t n = 0;
  double frequency = 0.0;
  double se = 0.0;
  std::vector<double> per_coordinate;
  std::vector<double> per_coordinate_se;
};

std::vector<SelectionPoint> sparsity_curve(const ReplicationSet& set);

double binomial_se(double p_hat, std::size_t R);

struct MomentPoint {
  std::size_t n = 0;
  double q = 0.0;
  double u_moment = 0.0;
  double u_se = 0.0;
  double v_moment = 0.0;
  double v_se = 0.0;
};

struct MomentVerdict {
  double q = 0.0;
  double u_ratio = 1.0;  // max / min over the n-grid
  Boundedness u_verdict = Boundedness::plausibly_bounded;
  double v_ratio = 1.0;
  Boundedness v_verdict = Boundedness::plausibly_bounded;
};

struct MomentTrajectory {
  std::vector<MomentPoint> points;  // n-major, then q
  std::vector<MomentVerdict> verdicts;

  const MomentPoint* find(std::size_t n, double q) const;
};

inline constexpr std::size_t kBootstrapResamples = 200;

// Mean of values and its bootstrap standard error.
std::pair<double, double> bootstrap_mean(const std::vector<double>& values, std::size_t resamples,
                                         Seed seed);

MomentTrajectory moment_trajectory(const ReplicationSet& set, const std::vector<double>& q_list,
                                   Seed seed);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct LimitDistancePoint {
  std::size_t n = 0;
  // sparse-normal: mean of v_hat, its SE, (mean - bias) / SE, covariance.
  // sparse-slow: mean of (n / lambda_n)(rho_hat - rho0) against the drift.
  // pseudo-true: mean of theta_hat against theta'.
  Vector mean;
  Vector se;
  Vector mean_gap_se;
  Matrix cov;
  double cov_relative_gap = 0.0;
  // standard: per-margin KS distance of sqrt(n)(theta_hat - theta0) vs argmin V0.
  std::vector<double> ks;
  // pseudo-true: frequency of exact zeros on the coordinates where theta' = 0.
  std::vector<double> zero_frequency;
};

struct LimitDistanceReport {
  RegimeTag regime = RegimeTag::standard;
  Vector target_mean;
  Matrix target_cov;
  std::vector<LimitDistancePoint> points;
  std::vector<std::string> notes;
};

// limit_samples (R x p) are needed for the standard regime only.
LimitDistanceReport compare_to_limit(const ReplicationSet& set, const LimitLaw& law,
                                     const Matrix* limit_samples = nullptr);

struct MCSummary {
  std::vector<SelectionPoint> selection;
  MomentTrajectory moments;
  TailReport tail;
  std::optional<LimitLaw> law;
  std::optional<LimitDistanceReport> limit_distance;
  std::vector<std::string> warnings;
};

// The full set of reports for a campaign. C0 is the Gram matrix of the frozen
// design at the largest n.
MCSummary summarize(const MCConfig& cfg, const ReplicationSet& set);

}  // namespace bridgelab
