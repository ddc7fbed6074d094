#pragma once

#include <cstddef>
#include <vector>

#include "bridgelab/box.hpp"
#include "bridgelab/contrast.hpp"
#include "bridgelab/linalg.hpp"
#include "bridgelab/penalty.hpp"

namespace bridgelab {

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_sweeps = 10000;
  // Add the true parameter as a start when the data are simulated.
  bool oracle_start = true;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

struct EstimateResult {
  Vector theta;
  Vector z;
  Vector rho;
  double objective = 0.0;
  std::vector<bool> exact_zero;  // per zero-block coordinate: z_j == 0 literally
  std::size_t restarts_used = 0;
  bool converged = false;
  std::size_t iterations = 0;  // sweeps of the winning start
  bool on_boundary = false;
};

// theta' G theta - 2 h' theta + constant + sum_j [pen_j(theta_j) + linear_j theta_j]
// with G symmetric positive semidefinite.
struct SeparableQuadratic {
  Matrix G;
  Vector h;
  double constant = 0.0;
  std::vector<ScalarPenalty> penalties;
  Vector linear;

  std::size_t dim() const { return static_cast<std::size_t>(h.size()); }
  double value(const Vector& theta) const;
};

struct DescentResult {
  Vector theta;
  bool converged = false;
  std::size_t sweeps = 0;
};

// Cyclic exact coordinate descent: each coordinate is replaced by the global
// minimizer of the objective along that axis inside the box.
DescentResult coordinate_descent(const SeparableQuadratic& problem, const Box& box, Vector start,
                                 const SolverOptions& opts);

struct MultistartResult {
  Vector theta;
  double objective = 0.0;
  bool converged = false;
  std::size_t sweeps = 0;
  std::size_t restarts = 0;
};

// Runs coordinate descent from every distinct start and keeps the terminal
// point with the smallest `objective`, ties broken by lexicographically
// smallest theta. `objective` defaults to problem.value.
template <class Objective>
MultistartResult multistart(const SeparableQuadratic& problem, const Box& box,
                            const std::vector<Vector>& starts, const SolverOptions& opts,
                            Objective&& objective);
MultistartResult multistart(const SeparableQuadratic& problem, const Box& box,
                            const std::vector<Vector>& starts, const SolverOptions& opts);

// Least-squares part of Z_n in Gram form, with the contrast's penalty on every coordinate.
SeparableQuadratic contrast_problem(const Contrast& c);

// Unpenalized least-squares fit (minimum-norm when the Gram matrix is singular).
Vector least_squares(const Matrix& G, const Vector& h);

// Global minimization of Z_n over the box from the multistart set: least
// squares, 0, the true parameter (simulation mode, opts.oracle_start), and
// every on/off pattern of the first min(p0, 6) zero-block coordinates.
EstimateResult minimize(const Contrast& c, const Box& box, const SolverOptions& opts = {});
EstimateResult minimize(const Contrast& c, const SolverOptions& opts = {});

// Coordinate descent from a single start.
EstimateResult descend_from(const Contrast& c, const Box& box, const Vector& start,
                            const SolverOptions& opts = {});

// Brute-force nested lattice search, p <= 3. Each stage evaluates a
// points_per_axis lattice (plus every sub-lattice with a subset of the
// coordinates pinned to exactly 0), recenters on the best point and shrinks
// the span by 4 / points_per_axis. `stage_objectives`, when given, receives
// the best objective after each stage.
EstimateResult grid_oracle(const Contrast& c, const Box& box, std::size_t stages,
                           std::size_t points_per_axis,
                           std::vector<double>* stage_objectives = nullptr);

// --- implementation ------------------------------------------------------

namespace detail {
bool lexicographically_less(const Vector& a, const Vector& b);
}

template <class Objective>
MultistartResult multistart(const SeparableQuadratic& problem, const Box& box,
                            const std::vector<Vector>& starts, const SolverOptions& opts,
                            Objective&& objective) {
  MultistartResult best;
  bool have = false;
  std::vector<Vector> seen;
  for (const Vector& s : starts) {
    const Vector start = box.clamp(s);
    bool duplicate = false;
    for (const auto& v : seen)
      if (v == start) duplicate = true;
    if (duplicate) continue;
    seen.push_back(start);
    DescentResult r = coordinate_descent(problem, box, start, opts);
    const double value = objective(r.theta);
    if (!have || value < best.objective ||
        (value == best.objective && detail::lexicographically_less(r.theta, best.theta))) {
      best.theta = std::move(r.theta);
      best.objective = value;
      best.converged = r.converged;
      best.sweeps = r.sweeps;
      have = true;
    }
  }
  best.restarts = seen.size();
  return best;
}

}  // namespace bridgelab
