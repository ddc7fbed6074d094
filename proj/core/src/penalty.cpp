#include "bridgelab/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bridgelab/diagnostics.hpp"
#include "bridgelab/errors.hpp"

namespace bridgelab {

std::string_view to_string(PenaltyFamily f) {
  switch (f) {
    case PenaltyFamily::none: return "none";
    case PenaltyFamily::bridge: return "bridge";
    case PenaltyFamily::scad: return "scad";
    case PenaltyFamily::selo: return "selo";
  }
  return "unknown";
}

ScalarPenalty ScalarPenalty::bridge(double lambda, double gamma) {
  ScalarPenalty p;
  p.family = PenaltyFamily::bridge;
  p.lambda = lambda;
  p.gamma = gamma;
  return p;
}

double ScalarPenalty::value(double t) const {
  if (is_zero()) return 0.0;
  const double x = std::abs(t);
  if (x == 0.0) return 0.0;
  switch (family) {
    case PenaltyFamily::none:
      return 0.0;
    case PenaltyFamily::bridge:
      return lambda * std::pow(x, gamma);
    case PenaltyFamily::scad:
      if (x <= lambda) return n * lambda * x;
      if (x <= a * lambda) return -n * (x * x - 2.0 * a * lambda * x + lambda * lambda) / (2.0 * (a - 1.0));
      return n * (a + 1.0) * lambda * lambda / 2.0;
    case PenaltyFamily::selo:
      return 2.0 * n * lambda / std::numbers::ln2 * std::log1p(x / (x + tau));
  }
  return 0.0;
}

PenaltySpec PenaltySpec::none() { return PenaltySpec{}; }

PenaltySpec PenaltySpec::bridge(double gamma, TuningSchedule schedule) {
  PenaltySpec p;
  p.family = PenaltyFamily::bridge;
  p.gamma = gamma;
  p.schedule = schedule;
  p.validate();
  return p;
}

PenaltySpec PenaltySpec::scad(double a, TuningSchedule schedule) {
  PenaltySpec p;
  p.family = PenaltyFamily::scad;
  p.a = a;
  p.schedule = schedule;
  p.validate();
  return p;
}

PenaltySpec PenaltySpec::selo(TuningSchedule tau, TuningSchedule schedule) {
  PenaltySpec p;
  p.family = PenaltyFamily::selo;
  p.tau = tau;
  p.schedule = schedule;
  p.validate();
  return p;
}

void PenaltySpec::validate() const {
  if (family == PenaltyFamily::none) return;
  if (!(schedule.c > 0.0) || !std::isfinite(schedule.c) || !std::isfinite(schedule.e)) {
    throw InvalidSpec("tuning schedule needs c > 0 and a finite exponent");
  }
  if (family == PenaltyFamily::bridge && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw InvalidSpec("bridge index gamma must be positive");
  }
  if (family == PenaltyFamily::scad && !(a > 2.0 && std::isfinite(a))) {
    throw InvalidSpec("SCAD parameter a must exceed 2");
  }
  if (family == PenaltyFamily::selo && (!(tau.c > 0.0) || !std::isfinite(tau.e))) {
    throw InvalidSpec("SELO tau schedule needs c > 0 and a finite exponent");
  }
}

ScalarPenalty PenaltySpec::at(std::size_t n) const {
  ScalarPenalty p;
  p.family = family;
  if (family == PenaltyFamily::none) return p;
  p.n = static_cast<double>(n);
  p.lambda = schedule.at(n);
  p.gamma = gamma;
  p.a = a;
  p.tau = tau.at(n);
  return p;
}

double penalty_value(const PenaltySpec& pen, std::size_t n, double t) { return pen.at(n).value(t); }

double penalty_total(const ScalarPenalty& pen, const Vector& theta) {
  double total = 0.0;
  for (double t : theta) total += pen.value(t);
  return total;
}

double penalty_total(const PenaltySpec& pen, std::size_t n, const Vector& theta) {
  return penalty_total(pen.at(n), theta);
}

double scalar_objective(const ScalarPenalty& pen, double c, double b, double x) {
  const double d = x - b;
  return c * d * d + pen.value(x);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Root of an increasing function on [lo, hi] with f(lo) < 0 < f(hi): Newton
// steps kept inside the shrinking bracket, bisection otherwise.
template <class F, class DF>
double increasing_root(F f, DF df, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x;
    else hi = x;
    const double d = df(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * kEps * std::abs(x) || hi - lo <= 2.0 * kEps * std::abs(hi)) {
      return std::abs(f(next)) <= std::abs(fx) ? next : x;
    }
    x = next;
  }
  return x;
}

// Local minima in (0, bmag] of c (x - bmag)^2 + lambda x^gamma, gamma != 1.
void bridge_candidates(const ScalarPenalty& pen, double c, double bmag, std::vector<double>& out) {
  const double lam = pen.lambda;
  const double g = pen.gamma;
  auto dh = [&](double x) { return 2.0 * c * (x - bmag) + lam * g * std::pow(x, g - 1.0); };
  auto d2h = [&](double x) { return 2.0 * c + lam * g * (g - 1.0) * std::pow(x, g - 2.0); };
  if (g == 2.0) {
    out.push_back(c * bmag / (c + lam));
    return;
  }
  if (g > 1.0) {
    // Strictly convex; dh(0+) = -2 c bmag < 0 < dh(bmag).
    out.push_back(increasing_root(dh, d2h, 0.0, bmag));
    return;
  }
  // gamma < 1: dh decreases up to its inflection point, then increases.
  const double inflection = std::pow(lam * g * (1.0 - g) / (2.0 * c), 1.0 / (2.0 - g));
  if (!(inflection < bmag)) return;
  if (!(dh(inflection) < 0.0)) return;
  out.push_back(increasing_root(dh, d2h, inflection, bmag));
}

void scad_candidates(const ScalarPenalty& pen, double c, double bmag, std::vector<double>& out) {
  const double lam = pen.lambda;
  const double a = pen.a;
  const double n = pen.n;
  // |x| <= lambda: c (x - b)^2 + n lambda x.
  out.push_back(std::clamp(bmag - n * lam / (2.0 * c), 0.0, lam));
  // lambda < |x| <= a lambda: quadratic with leading coefficient c - n / (2(a-1)).
  out.push_back(lam);
  out.push_back(a * lam);
  const double curvature = 2.0 * c - n / (a - 1.0);
  if (curvature > 0.0) {
    const double x = (2.0 * c * bmag - n * a * lam / (a - 1.0)) / curvature;
    out.push_back(std::clamp(x, lam, a * lam));
  }
  // |x| > a lambda: flat penalty.
  out.push_back(std::max(bmag, a * lam));
}

void selo_candidates(const ScalarPenalty& pen, double c, double bmag, std::vector<double>& out) {
  const double tau = pen.tau;
  const double k = 2.0 * pen.n * pen.lambda / std::numbers::ln2;
  auto dh = [&](double x) { return 2.0 * c * (x - bmag) + k * tau / ((2.0 * x + tau) * (x + tau)); };
  auto d2h = [&](double x) {
    const double u = (2.0 * x + tau) * (x + tau);
    return 2.0 * c - k * tau * (4.0 * x + 3.0 * tau) / (u * u);
  };
  // (x + tau)(2x + tau) dh(x) / (2c) is a cubic whose only critical point in
  // [0, inf) where it can turn from decreasing to increasing is:
  const double turn =
      ((2.0 * bmag - 3.0 * tau) +
       std::sqrt(4.0 * bmag * bmag + 6.0 * bmag * tau + 3.0 * tau * tau)) / 6.0;
  const double lo = std::max(0.0, turn);
  if (!(lo < bmag)) return;
  if (!(dh(lo) < 0.0)) return;
  out.push_back(increasing_root(dh, d2h, lo, bmag));
}

struct Scored {
  double x;
  double objective;
};

// Lexicographic order: objective, then |x|, then negative before positive.
bool better(const Scored& a, const Scored& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (std::abs(a.x) != std::abs(b.x)) return std::abs(a.x) < std::abs(b.x);
  return a.x < b.x;
}

// Last-resort minimization on a refining lattice over [lo, hi]; also tries 0.
double nested_grid_prox(const ScalarPenalty& pen, double c, double b, double lo, double hi) {
  Scored best{0.0, std::numeric_limits<double>::infinity()};
  if (lo <= 0.0 && 0.0 <= hi) best = {0.0, scalar_objective(pen, c, b, 0.0)};
  double left = lo, right = hi;
  constexpr int kPoints = 1001;
  for (int stage = 0; stage < 12; ++stage) {
    const double step = (right - left) / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) {
      const double x = left + step * i;
      const Scored s{x, scalar_objective(pen, c, b, x)};
      if (std::isfinite(s.objective) && better(s, best)) best = s;
    }
    left = std::max(lo, best.x - 2.0 * step);
    right = std::min(hi, best.x + 2.0 * step);
    if (!(right > left)) break;
  }
  return best.x;
}

double pick_best(const ScalarPenalty& pen, double c, double b, const std::vector<double>& xs,
                 bool& all_finite) {
  Scored best{0.0, std::numeric_limits<double>::infinity()};
  bool first = true;
  all_finite = true;
  for (double x : xs) {
    const Scored s{x, scalar_objective(pen, c, b, x)};
    if (!std::isfinite(s.objective)) {
      all_finite = false;
      continue;
    }
    if (first || better(s, best)) best = s;
    first = false;
  }
  return best.x;
}

}  // namespace

std::vector<double> scalar_prox_candidates(const ScalarPenalty& pen, double c, double b) {
  if (!(c > 0.0)) throw InvalidInput("scalar prox needs c > 0");
  if (!std::isfinite(b)) throw InvalidInput("scalar prox needs a finite center");
  if (pen.is_zero()) return {b};
  std::vector<double> out{0.0};
  if (b == 0.0) return out;
  const double bmag = std::abs(b);
  switch (pen.family) {
    case PenaltyFamily::none:
      break;
    case PenaltyFamily::bridge:
      if (pen.gamma == 1.0) out.push_back(std::max(bmag - pen.lambda / (2.0 * c), 0.0));
      else bridge_candidates(pen, c, bmag, out);
      break;
    case PenaltyFamily::scad:
      scad_candidates(pen, c, bmag, out);
      break;
    case PenaltyFamily::selo:
      selo_candidates(pen, c, bmag, out);
      break;
  }
  if (b < 0.0)
    for (double& x : out) x = -x;
  return out;
}

double scalar_prox(const ScalarPenalty& pen, double c, double b) {
  const auto candidates = scalar_prox_candidates(pen, c, b);
  if (pen.is_zero()) return b;
  bool finite = true;
  const double x = pick_best(pen, c, b, candidates, finite);
  if (finite) return x == 0.0 ? 0.0 : x;
  const double span = 2.0 * std::abs(b) + 1.0;
  return nested_grid_prox(pen, c, b, -span, span);
}

double scalar_prox(const PenaltySpec& pen, std::size_t n, double c, double b) {
  return scalar_prox(pen.at(n), c, b);
}

double scalar_prox_box(const ScalarPenalty& pen, double c, double b, double lo, double hi) {
  if (!(lo < hi)) throw InvalidInput("scalar prox box needs lo < hi");
  std::vector<double> xs;
  for (double x : scalar_prox_candidates(pen, c, b))
    if (x >= lo && x <= hi) xs.push_back(x);
  xs.push_back(lo);
  xs.push_back(hi);
  bool finite = true;
  const double x = pick_best(pen, c, b, xs, finite);
  if (finite) return x == 0.0 ? 0.0 : x;
  return nested_grid_prox(pen, c, b, lo, hi);
}

// --- Condition checkers --------------------------------------------------

double sphere_penalty_infimum(const ScalarPenalty& pen, std::size_t p0, double r) {
  if (p0 == 0) throw InvalidInput("sphere infimum needs p0 >= 1");
  if (!(r >= 0.0)) throw InvalidInput("sphere radius must be non-negative");
  const double root_n = std::sqrt(pen.n);
  auto term = [&](double uk) { return pen.value(uk / root_n); };
  if (p0 == 1) return term(r);

  auto total = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (double uk : u) s += term(uk);
    return s;
  };
  std::vector<double> axis(p0, 0.0);
  axis[0] = r;
  std::vector<double> diagonal(p0, r / std::sqrt(static_cast<double>(p0)));
  std::vector<double> u = total(axis) <= total(diagonal) ? axis : diagonal;
  double value = total(u);

  constexpr int kAngles = 257;
  constexpr double kQuarter = std::numbers::pi / 2.0;
  for (int pass = 0; pass < 100; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < p0; ++i) {
      for (std::size_t j = i + 1; j < p0; ++j) {
        const double rho = std::hypot(u[i], u[j]);
        if (rho == 0.0) continue;
        auto pair = [&](double phi) {
          return term(rho * std::cos(phi)) + term(rho * std::sin(phi));
        };
        int best_k = 0;
        double best = pair(0.0);
        for (int k = 1; k < kAngles; ++k) {
          const double v = pair(kQuarter * k / (kAngles - 1));
          if (v < best) {
            best = v;
            best_k = k;
          }
        }
        double best_phi = kQuarter * best_k / (kAngles - 1);
        // Golden-section refinement in the neighbouring cells.
        double lo = std::max(0.0, best_phi - kQuarter / (kAngles - 1));
        double hi = std::min(kQuarter, best_phi + kQuarter / (kAngles - 1));
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = pair(x1), f2 = pair(x2);
        for (int it = 0; it < 80; ++it) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = pair(x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = pair(x2);
          }
        }
        if (f1 < best) {
          best = f1;
          best_phi = x1;
        }
        const double current = term(u[i]) + term(u[j]);
        if (best < current - 1e-15 * std::abs(current)) {
          u[i] = rho * std::cos(best_phi);
          u[j] = rho * std::sin(best_phi);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  value = std::min(value, total(u));
  return value;
}

namespace {

void require_sorted_positive(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InvalidInput(std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw InvalidInput(std::string(what) + " entries must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidInput(std::string(what) + " must be strictly increasing");
    }
  }
}

void require_n_grid(std::span<const std::size_t> n_grid) {
  if (n_grid.empty()) throw InvalidInput("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw InvalidInput("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidInput("n-grid must be strictly increasing");
  }
}

std::string n_label(std::size_t n) { return "n=" + std::to_string(n); }

}  // namespace

PenaltyConditionReport check_divergence_condition(const PenaltySpec& pen, std::size_t p0,
                                                  std::span<const std::size_t> n_grid,
                                                  std::span<const double> r_grid,
                                                  std::optional<TuningSchedule> q_n) {
  require_n_grid(n_grid);
  require_sorted_positive(r_grid, "r-grid");
  if (p0 == 0) throw InvalidInput("divergence condition needs a zero block (p0 >= 1)");
  if (r_grid.size() < 2) throw InvalidInput("divergence condition needs at least two radii");

  PenaltyConditionReport report;
  report.id = "penalty-divergence";
  report.description =
      "q_n^-1 inf_{|u|>=r} sum_k pen_n(u_k / sqrt n); needs growth to infinity in r uniformly in n";
  report.n_grid.assign(n_grid.begin(), n_grid.end());
  if (!q_n) report.notes.push_back("q_n defaults to pen_n(1/sqrt n)");

  bool satisfied = true;
  double slope_sum = 0.0;
  double residual = 0.0;
  std::size_t fits = 0;
  for (std::size_t n : n_grid) {
    const ScalarPenalty sp = pen.at(n);
    const double q = q_n ? q_n->at(n) : sp.value(1.0 / std::sqrt(static_cast<double>(n)));
    ProbeSeries s{n_label(n), {}, {}};
    for (double r : r_grid) {
      s.x.push_back(r);
      s.values.push_back(q > 0.0 ? sphere_penalty_infimum(sp, p0, r) / q : 0.0);
    }
    const auto& v = s.values;
    bool monotone = true;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] < v[k - 1] * (1.0 - 1e-12)) monotone = false;
    const bool doubled = v.back() > 2.0 * v.front();
    // Saturation guard: a bounded penalty flattens out over the top of the grid.
    const std::size_t m = v.size();
    bool growing_tail = false;
    if (v[m - 2] > 0.0 && v[m - 1] > 0.0) {
      const double tail_slope = std::log(v[m - 1] / v[m - 2]) / std::log(s.x[m - 1] / s.x[m - 2]);
      growing_tail = tail_slope >= 0.05;
    }
    if (!(monotone && doubled && growing_tail)) satisfied = false;

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < m; ++k) {
      if (v[k] > 0.0) {
        lx.push_back(std::log(s.x[k]));
        ly.push_back(std::log(v[k]));
      }
    }
    if (auto fit = fit_line(lx, ly)) {
      slope_sum += fit->slope;
      residual = std::max(residual, fit->max_abs_residual);
      ++fits;
    }
    report.series.push_back(std::move(s));
  }
  report.satisfied = satisfied;
  if (fits > 0) {
    report.fitted_power = slope_sum / static_cast<double>(fits);
    report.fit_residual = residual;
  }
  if (!satisfied) report.notes.push_back("scaled infimum does not grow without bound over the r-grid");
  return report;
}

std::pair<PenaltyConditionReport, PenaltyConditionReport> check_smooth_conditions(
    const PenaltySpec& pen, std::span<const std::size_t> n_grid, std::span<const double> a_probes,
    std::span<const double> b_probes, double beta) {
  require_n_grid(n_grid);
  if (a_probes.empty() || b_probes.empty()) throw InvalidInput("probe sets must be non-empty");
  for (double a : a_probes)
    if (a == 0.0 || !std::isfinite(a)) throw InvalidInput("a-probes must be finite and nonzero");
  for (double b : b_probes)
    if (b == 0.0 || !std::isfinite(b)) throw InvalidInput("b-probes must be finite and nonzero");

  std::vector<double> ns;
  for (std::size_t n : n_grid) ns.push_back(static_cast<double>(n));

  PenaltyConditionReport growth;
  growth.id = "penalty-growth";
  growth.description = "n^-(1/2+beta) pen_n(a), bounded in n for every a";
  growth.n_grid.assign(n_grid.begin(), n_grid.end());
  growth.satisfied = true;
  for (double a : a_probes) {
    ProbeSeries s{"a=" + std::to_string(a), ns, {}};
    for (std::size_t n : n_grid) {
      s.values.push_back(std::pow(static_cast<double>(n), -0.5 - beta) * penalty_value(pen, n, a));
    }
    if (classify_boundedness(s.values) == Boundedness::growing) growth.satisfied = false;
    growth.series.push_back(std::move(s));
  }

  PenaltyConditionReport local;
  local.id = "penalty-local-increment";
  local.description = "|pen_n(a + b/sqrt n) - pen_n(a)| / |b|^kappa, bounded in n";
  local.n_grid.assign(n_grid.begin(), n_grid.end());
  for (int kappa : {1, 2}) {
    bool bounded = true;
    std::vector<ProbeSeries> series;
    for (double a : a_probes) {
      for (double b : b_probes) {
        ProbeSeries s{"a=" + std::to_string(a) + ",b=" + std::to_string(b) +
                          ",kappa=" + std::to_string(kappa),
                      ns, {}};
        for (std::size_t n : n_grid) {
          const ScalarPenalty sp = pen.at(n);
          const double shifted = a + b / std::sqrt(static_cast<double>(n));
          s.values.push_back(std::abs(sp.value(shifted) - sp.value(a)) /
                             std::pow(std::abs(b), kappa));
        }
        if (classify_boundedness(s.values) == Boundedness::growing) bounded = false;
        series.push_back(std::move(s));
      }
    }
    for (auto& s : series) local.series.push_back(std::move(s));
    if (bounded && !local.kappa) local.kappa = kappa;
  }
  local.satisfied = local.kappa.has_value();
  return {std::move(growth), std::move(local)};
}

}  // namespace bridgelab
