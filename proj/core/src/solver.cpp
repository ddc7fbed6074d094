#include "bridgelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bridgelab/errors.hpp"

namespace bridgelab {

namespace detail {
bool lexicographically_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}
}  // namespace detail

double SeparableQuadratic::value(const Vector& theta) const {
  double v = theta.dot(G * theta) - 2.0 * h.dot(theta) + constant;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    v += penalties[static_cast<std::size_t>(j)].value(theta[j]);
    if (linear.size() > 0) v += linear[j] * theta[j];
  }
  return v;
}

namespace {

// Minimizer along a coordinate whose quadratic coefficient vanishes:
// pen(x) + slope x over [lo, hi].
double flat_coordinate(const ScalarPenalty& pen, double slope, double lo, double hi) {
  double best = lo;
  double best_value = pen.value(lo) + slope * lo;
  auto consider = [&](double x) {
    const double v = pen.value(x) + slope * x;
    if (v < best_value || (v == best_value && std::abs(x) < std::abs(best))) {
      best = x;
      best_value = v;
    }
  };
  consider(hi);
  if (lo <= 0.0 && 0.0 <= hi) consider(0.0);
  return best == 0.0 ? 0.0 : best;
}

}  // namespace

DescentResult coordinate_descent(const SeparableQuadratic& problem, const Box& box, Vector start,
                                 const SolverOptions& opts) {
  const auto p = static_cast<Eigen::Index>(problem.dim());
  if (!(opts.tolerance > 0.0)) throw InvalidInput("solver tolerance must be positive");
  if (start.size() != p || box.lo.size() != p) throw InvalidInput("start or box has the wrong dimension");
  DescentResult out;
  out.theta = box.clamp(start);
  Vector& theta = out.theta;
  for (std::size_t sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double largest_move = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& pen = problem.penalties[static_cast<std::size_t>(j)];
      const double lin = problem.linear.size() > 0 ? problem.linear[j] : 0.0;
      const double c = problem.G(j, j);
      const double coupled = problem.G.col(j).dot(theta) - c * theta[j];
      const double old = theta[j];
      double next;
      if (c > 0.0) {
        const double b = (problem.h[j] - coupled - 0.5 * lin) / c;
        next = scalar_prox_box(pen, c, b, box.lo[j], box.hi[j]);
      } else {
        next = flat_coordinate(pen, lin - 2.0 * problem.h[j], box.lo[j], box.hi[j]);
      }
      theta[j] = next;
      largest_move = std::max(largest_move, std::abs(next - old));
    }
    out.sweeps = sweep;
    if (largest_move <= opts.tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

MultistartResult multistart(const SeparableQuadratic& problem, const Box& box,
                            const std::vector<Vector>& starts, const SolverOptions& opts) {
  return multistart(problem, box, starts, opts,
                    [&problem](const Vector& t) { return problem.value(t); });
}

SeparableQuadratic contrast_problem(const Contrast& c) {
  const Dataset& d = c.data();
  SeparableQuadratic q;
  q.G = d.X.transpose() * d.X;
  q.G = 0.5 * (q.G + q.G.transpose()).eval();
  q.h = d.X.transpose() * d.Y;
  q.constant = d.Y.squaredNorm();
  q.penalties.assign(c.p(), c.scalar_penalty());
  return q;
}

Vector least_squares(const Matrix& G, const Vector& h) {
  Eigen::LDLT<Matrix> ldlt(G);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const double lo = ldlt.vectorD().minCoeff();
    const double hi = ldlt.vectorD().maxCoeff();
    if (lo > 1e-12 * std::max(hi, 1.0)) return ldlt.solve(h);
  }
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(G).solve(h);
}

namespace {

EstimateResult package(const Contrast& c, const Box& box, Vector theta, bool converged,
                       std::size_t sweeps, std::size_t restarts) {
  const auto p0 = static_cast<Eigen::Index>(c.data().p0());
  const auto p1 = static_cast<Eigen::Index>(c.data().p1());
  EstimateResult r;
  r.objective = contrast_value(c, theta);
  r.z = theta.head(p0);
  r.rho = theta.tail(p1);
  for (Eigen::Index k = 0; k < p0; ++k) r.exact_zero.push_back(theta[k] == 0.0);
  r.on_boundary = box.on_boundary(theta);
  r.theta = std::move(theta);
  r.converged = converged;
  r.iterations = sweeps;
  r.restarts_used = restarts;
  return r;
}

void check_box(const Contrast& c, const Box& box) {
  box.validate();
  if (box.dim() != c.p()) throw InvalidInput("box dimension does not match the contrast");
}

}  // namespace

EstimateResult minimize(const Contrast& c, const Box& box, const SolverOptions& opts) {
  check_box(c, box);
  const SeparableQuadratic problem = contrast_problem(c);
  const Vector ols = least_squares(problem.G, problem.h);
  const auto p = static_cast<Eigen::Index>(c.p());
  const std::size_t p0 = c.data().p0();
  const std::size_t patterned = std::min<std::size_t>(p0, 6);

  std::vector<Vector> starts{ols, Vector::Zero(p)};
  if (opts.oracle_start && c.data().noise) starts.push_back(c.data().truth.theta());
  for (std::size_t mask = 0; mask < (std::size_t{1} << patterned); ++mask) {
    Vector s = ols;
    for (std::size_t k = 0; k < patterned; ++k)
      if (!((mask >> k) & 1U)) s[static_cast<Eigen::Index>(k)] = 0.0;
    starts.push_back(std::move(s));
  }
  MultistartResult best = multistart(problem, box, starts, opts,
                                     [&c](const Vector& t) { return contrast_value(c, t); });
  return package(c, box, std::move(best.theta), best.converged, best.sweeps, best.restarts);
}

EstimateResult minimize(const Contrast& c, const SolverOptions& opts) {
  return minimize(c, c.box(), opts);
}

EstimateResult descend_from(const Contrast& c, const Box& box, const Vector& start,
                            const SolverOptions& opts) {
  check_box(c, box);
  DescentResult r = coordinate_descent(contrast_problem(c), box, start, opts);
  return package(c, box, std::move(r.theta), r.converged, r.sweeps, 1);
}

EstimateResult grid_oracle(const Contrast& c, const Box& box, std::size_t stages,
                           std::size_t points_per_axis, std::vector<double>* stage_objectives) {
  check_box(c, box);
  const std::size_t p = c.p();
  if (p > 3) throw InvalidInput("grid oracle refused: p = " + std::to_string(p) + " exceeds 3");
  if (points_per_axis < 11) throw InvalidInput("grid oracle needs at least 11 points per axis");
  if (stages < 1) throw InvalidInput("grid oracle needs at least one stage");

  const auto dim = static_cast<Eigen::Index>(p);
  Vector center = 0.5 * (box.lo + box.hi);
  Vector half = 0.5 * (box.hi - box.lo);
  Vector best_theta = center;
  double best = contrast_value(c, center);
  auto consider = [&](const Vector& t) {
    const double v = contrast_value(c, t);
    if (v < best || (v == best && detail::lexicographically_less(t, best_theta))) {
      best = v;
      best_theta = t;
    }
  };
  const double shrink = 4.0 / static_cast<double>(points_per_axis);

  for (std::size_t stage = 0; stage < stages; ++stage) {
    std::vector<std::vector<double>> axes(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double lo = std::max(box.lo[jj], center[jj] - half[jj]);
      const double hi = std::min(box.hi[jj], center[jj] + half[jj]);
      for (std::size_t k = 0; k < points_per_axis; ++k) {
        axes[j].push_back(lo + (hi - lo) * static_cast<double>(k) /
                                   static_cast<double>(points_per_axis - 1));
      }
    }
    // pinned: bit j set pins coordinate j to 0 (when the box allows it).
    for (std::size_t pinned = 0; pinned < (std::size_t{1} << p); ++pinned) {
      bool feasible = true;
      for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (((pinned >> j) & 1U) && !(box.lo[jj] <= 0.0 && 0.0 <= box.hi[jj])) feasible = false;
      }
      if (!feasible) continue;
      std::vector<std::size_t> index(p, 0);
      Vector t(dim);
      while (true) {
        for (std::size_t j = 0; j < p; ++j) {
          t[static_cast<Eigen::Index>(j)] = ((pinned >> j) & 1U) ? 0.0 : axes[j][index[j]];
        }
        consider(t);
        std::size_t j = 0;
        for (; j < p; ++j) {
          if ((pinned >> j) & 1U) continue;
          if (++index[j] < points_per_axis) break;
          index[j] = 0;
        }
        if (j == p) break;
      }
    }
    if (stage_objectives) stage_objectives->push_back(best);
    center = best_theta;
    half *= shrink;
  }
  return package(c, box, best_theta, true, stages, 1);
}

}  // namespace bridgelab
