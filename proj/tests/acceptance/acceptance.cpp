// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bridgelab/asymptotics.hpp"
#include "bridgelab/cli/commands.hpp"
#include "bridgelab/contrast.hpp"
#include "bridgelab/montecarlo.hpp"
#include "bridgelab/solver.hpp"
#include "oracles.hpp"

using namespace bridgelab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("{} {:2d} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
  std::fflush(stdout);
}

MCConfig sparse_campaign() {
  MCConfig cfg;
  cfg.truth = TrueParameter(1, Vector::Ones(1));
  cfg.design.p = 2;
  cfg.noise = {NoiseFamily::gaussian, 1.0};
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.6});
  cfg.n_grid = {50, 200, 800, 3200};
  cfg.replications = 2000;
  cfg.seed = 20240601;
  cfg.r_grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
  cfg.q_list = {2.0, 4.0};
  cfg.L_list = {2.0, 4.0};
  return cfg;
}

const ReplicationSet& sparse_set() {
  static const ReplicationSet set = run_replications(sparse_campaign(), 0);
  return set;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pick = [&](std::initializer_list<double> xs) {
    return *(xs.begin() + static_cast<std::ptrdiff_t>(rng() % xs.size()));
  };
  double worst = -std::numeric_limits<double>::infinity();
  int bad = 0;
  const int instances = 500;
  for (int k = 0; k < instances; ++k) {
    const std::size_t p = 1 + rng() % 2;
    const std::size_t p0 = rng() % p;
    Vector rho(static_cast<Eigen::Index>(p - p0));
    for (auto& r : rho) r = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 2.5 * U(rng));
    const TrueParameter truth(p0, rho);
    const std::size_t n = p + 2 + rng() % (49 - p);
    DesignSpec design;
    design.p = p;
    design.kind = U(rng) < 0.5 ? DesignKind::standardized_orthonormal : DesignKind::bounded_random_frozen;
    design.bound = 3.0;
    const NoiseSpec noise{NoiseFamily::gaussian, 0.2 + 1.8 * U(rng)};
    PenaltySpec pen;
    switch (rng() % 3) {
      case 0:
        pen = PenaltySpec::bridge(pick({0.5, 1.0, 2.0}), {0.2 + 2.8 * U(rng), pick({0.0, 0.25, 0.5, 0.75, 1.0})});
        break;
      case 1:
        pen = PenaltySpec::scad(3.7, {0.1 + 1.9 * U(rng), pick({-0.5, -0.25, 0.0})});
        break;
      default:
        pen = PenaltySpec::selo({0.05 + 0.95 * U(rng), pick({0.0, -0.5})}, {0.1 + 1.9 * U(rng), pick({-0.5, -0.25, 0.0})});
        break;
    }
    const Seed seed = rng();
    const Matrix X = generate_design(design, n, derive_seed(seed, {1}));
    const Contrast c(simulate_dataset(X, truth, noise, derive_seed(seed, {2})), pen);
    const Box box = Box::default_for(p);
    const double got = minimize(c, box).objective;
    const double ref = grid_oracle(c, box, 14, 41).objective;
    const double excess = (got - ref) / (1.0 + std::abs(ref));
    worst = std::max(worst, excess);
    if (got > ref + 1e-8 * (1.0 + std::abs(ref))) ++bad;
  }
  return {bad == 0, fmt::format("{} of {} instances worse than the grid oracle; worst relative excess {:.3g}",
                                bad, instances, worst)};
}

Outcome prox_correctness() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, U(rng)); };
  int bad = 0, soft_bad = 0, soft_cases = 0;
  double worst = -std::numeric_limits<double>::infinity();
  const int cases = 10000;
  for (int k = 0; k < cases; ++k) {
    ScalarPenalty pen;
    const int family = static_cast<int>(rng() % 3);
    pen.lambda = log_uniform(0.01, 3.0);
    if (family == 0) {
      pen.family = PenaltyFamily::bridge;
      pen.gamma = (k % 7 == 0) ? 1.0 : 0.1 + 2.9 * U(rng);
    } else if (family == 1) {
      pen.family = PenaltyFamily::scad;
      pen.n = 1.0 + std::floor(49.0 * U(rng));
      pen.a = 2.5 + 2.0 * U(rng);
    } else {
      pen.family = PenaltyFamily::selo;
      pen.n = 1.0 + std::floor(49.0 * U(rng));
      pen.tau = log_uniform(0.01, 1.0);
    }
    const double c = log_uniform(0.1, 10.0);
    const double b = -5.0 + 10.0 * U(rng);
    const double x = scalar_prox(pen, c, b);
    const double fx = scalar_objective(pen, c, b, x);
    auto f = [&](double t) { return scalar_objective(pen, c, b, t); };
    const auto ref = oracle::nested_grid_1d(f, std::min(0.0, b) - 0.1, std::max(0.0, b) + 0.1, {0.0, b});
    worst = std::max(worst, fx - ref.value);
    if (fx > ref.value + 1e-10) ++bad;
    if (pen.family == PenaltyFamily::bridge && pen.gamma == 1.0) {
      ++soft_cases;
      const double soft = std::copysign(std::max(std::abs(b) - pen.lambda / (2.0 * c), 0.0), b);
      if (std::abs(x - soft) > 1e-12 * std::max(1.0, std::abs(b))) ++soft_bad;
    }
  }
  return {bad == 0 && soft_bad == 0 && soft_cases > 0,
          fmt::format("{} of {} cases above the nested-grid oracle (worst excess {:.3g}); "
                      "soft-threshold mismatches {} of {}",
                      bad, cases, worst, soft_bad, soft_cases)};
}

Outcome plaq_identity() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t p = 1 + rng() % 3;
    const std::size_t p0 = rng() % p;
    Vector rho = Vector::Constant(static_cast<Eigen::Index>(p - p0), 1.0 + std::abs(U(rng)));
    const TrueParameter truth(p0, rho);
    const std::size_t n = 20 + rng() % 200;
    DesignSpec design;
    design.p = p;
    design.kind = DesignKind::bounded_random_frozen;
    const Matrix X = generate_design(design, n, rng());
    PenaltySpec pen;
    switch (k % 3) {
      case 0: pen = PenaltySpec::bridge(0.3 + 1.5 * std::abs(U(rng)), {1.0, 0.5}); break;
      case 1: pen = PenaltySpec::scad(3.7, {0.5, -0.25}); break;
      default: pen = PenaltySpec::selo({1.0, -1.5}, {0.5, -0.5}); break;
    }
    const Contrast c(simulate_dataset(X, truth, {NoiseFamily::gaussian, 1.0}, rng()), pen);
    const Matrix C0 = gram(X, p0, p - p0).C + 0.1 * Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    const PlaqParts parts = plaq_decompose(c, truth.theta(), C0);
    Vector u(static_cast<Eigen::Index>(p));
    for (auto& x : u) x = 3.0 * U(rng);
    const double m = local_field(c, truth.theta(), u);
    const double err = std::abs(m - parts.reconstruct(u)) / (1.0 + std::abs(m));
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
  }
  return {bad == 0, fmt::format("{} of 100 pairs off; worst relative error {:.3g}", bad, worst)};
}

Outcome sparse_consistency() {
  const auto curve = sparsity_curve(sparse_set());
  bool monotone = true;
  std::string freqs;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    freqs += fmt::format("{}{}:{:.4f}", k ? " " : "", curve[k].n, curve[k].frequency);
    if (k > 0) {
      const double se = std::hypot(curve[k].se, curve[k - 1].se);
      if (curve[k].frequency < curve[k - 1].frequency - 2.0 * se) monotone = false;
    }
  }
  const double last = curve.back().frequency;
  return {monotone && last >= 0.9,
          fmt::format("P(z_hat = 0) by n [{}]; nondecreasing within 2 SE: {}", freqs, monotone ? "yes" : "no")};
}

Outcome sparse_normal_limit() {
  MCConfig cfg = sparse_campaign();
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.5});
  cfg.n_grid = {3200};
  cfg.seed = 515;
  const ReplicationSet set = run_replications(cfg, 0);
  const MCSummary s = summarize(cfg, set);
  if (!s.law || !s.limit_distance) return {false, "no limit law"};
  const auto& pt = s.limit_distance->points.back();
  const double bias = s.law->bias[0];
  const double var = pt.cov(0, 0);
  const double target_var = s.law->cov(0, 0);
  const bool mean_ok = std::abs(pt.mean_gap_se[0]) <= 3.0;
  const bool var_ok = std::abs(var - target_var) <= 0.1 * target_var;
  return {mean_ok && var_ok,
          fmt::format("mean v_hat {:.4f} vs bias {:.4f} ({:+.2f} SE); variance {:.4f} vs {:.4f}", pt.mean[0],
                      bias, pt.mean_gap_se[0], var, target_var)};
}

Outcome pldi_probe() {
  const MCConfig cfg = sparse_campaign();
  const TailReport tail = tail_curve(sparse_set(), cfg.r_grid, cfg.L_list);
  bool bounded = true;
  std::string seqs;
  for (std::size_t l = 0; l < tail.L.size(); ++l) {
    seqs += fmt::format("{}L={}:", l ? "; " : "", tail.L[l]);
    for (double v : tail.pldi_by_n[l]) seqs += fmt::format(" {:.4g}", v);
    if (tail.pldi_verdict[l] != Boundedness::plausibly_bounded) bounded = false;
  }
  std::string slope = "no informative range at n=800 (vacuous)";
  bool slope_ok = true;
  for (const auto& c : tail.curves) {
    if (c.n != 800 || !c.slope_fit) continue;
    slope_ok = c.slope_fit->slope <= -4.0;
    slope = fmt::format("slope at n=800 {:.3f} over {} points", c.slope_fit->slope, c.slope_fit->points);
  }
  return {bounded && slope_ok, fmt::format("max r^L P by n [{}]; {}", seqs, slope)};
}

Outcome moment_boundedness() {
  const MomentTrajectory m = moment_trajectory(sparse_set(), {4.0}, 99);
  std::string seq;
  for (const auto& p : m.points) seq += fmt::format(" {}:{:.4g}", p.n, p.u_moment);
  const auto& v = m.verdicts.front();
  return {v.u_ratio <= 2.0,
          fmt::format("E|sqrt(n) z_hat|^4 by n [{} ]; max/min ratio {}; growth verdict {}", seq,
                      std::isfinite(v.u_ratio) ? fmt::format("{:.3g}", v.u_ratio) : std::string("inf"),
                      to_string(v.u_verdict))};
}

Outcome standard_moment_convergence() {
  MCConfig cfg;
  cfg.truth = TrueParameter(0, Vector::Ones(1));
  cfg.design.p = 1;
  cfg.penalty = PenaltySpec::bridge(1.0, {0.5, 0.5});
  cfg.n_grid = {3200};
  cfg.replications = 2000;
  cfg.seed = 808;
  const ReplicationSet set = run_replications(cfg, 0);
  const MomentTrajectory m = moment_trajectory(set, {2.0}, cfg.seed);
  const MomentPoint& mp = m.points.back();

  const Matrix C0 = gram(set.designs.back(), 0, 1).C;
  const LimitLaw law = build_limit_law(regime_classify(1.0, cfg.penalty.schedule), C0, 1.0, cfg.truth,
                                       Box::default_for(1));
  const Matrix s = sample_limit_argmin(law, 100000, 4242);
  const Eigen::ArrayXd sq = s.rowwise().squaredNorm().array();
  const double lim = sq.mean();
  const double lim_se = std::sqrt((sq - lim).square().sum() / (sq.size() - 1.0) / sq.size());
  const double se = std::hypot(mp.v_se, lim_se);
  const double z = (mp.v_moment - lim) / se;
  return {std::abs(z) <= 3.0, fmt::format("E|u_n|^2 = {:.4f} (SE {:.4f}) vs E|u_0|^2 = {:.4f} (SE {:.4f}): {:+.2f} SE",
                                          mp.v_moment, mp.v_se, lim, lim_se, z)};
}

Outcome limit_sampler_sanity() {
  LimitFieldParams prm{2.0, 0.0, Matrix::Identity(2, 2), Vector::Ones(2)};
  const Matrix s = sample_limit_argmin(prm, 1.0, 100000, 909);
  const Vector mean = s.colwise().mean().transpose();
  const Matrix cen = s.rowwise() - mean.transpose();
  const Matrix cov = cen.transpose() * cen / (s.rows() - 1.0);
  const double dev = (cov - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff();
  return {dev <= 0.05, fmt::format("max |cov - I| entry {:.4f}", dev)};
}

Outcome penalty_classifications() {
  const std::vector<std::size_t> grid{100, 400, 1600, 6400};
  const std::vector<double> r{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const std::vector<double> a{0.5, 1.0, 2.0};
  const std::vector<double> b{-1.0, -0.5, 0.5, 1.0};
  const auto bridge = check_divergence_condition(PenaltySpec::bridge(0.5, {1.0, 0.6}), 2, grid, r);
  const double fit_err = bridge.fitted_power ? std::abs(*bridge.fitted_power - 0.5) : 1.0;
  const bool bridge_ok = bridge.satisfied && fit_err <= 1e-3;

  std::string detail = fmt::format("bridge(0.5): divergence {} with power {:.6f}", bridge.satisfied ? "satisfied" : "not satisfied",
                                   bridge.fitted_power.value_or(std::nan("")));
  bool others_ok = true;
  for (const auto& [name, spec] : {std::pair{"scad", PenaltySpec::scad(3.7, {1.0, -0.25})},
                                   std::pair{"selo", PenaltySpec::selo({1.0, -1.5}, {1.0, -0.5})}}) {
    const auto div = check_divergence_condition(spec, 2, grid, r);
    const auto [growth, inc] = check_smooth_conditions(spec, grid, a, b, 0.0);
    others_ok = others_ok && !div.satisfied && growth.satisfied && inc.satisfied;
    detail += fmt::format("; {}: divergence {}, growth {}, local increment {}", name,
                          div.satisfied ? "satisfied" : "not satisfied",
                          growth.satisfied ? "satisfied" : "not satisfied",
                          inc.satisfied ? "satisfied" : "not satisfied");
  }
  return {bridge_ok && others_ok, detail};
}

Outcome pseudo_true_regime() {
  MCConfig cfg = sparse_campaign();
  cfg.penalty = PenaltySpec::bridge(0.5, {0.5, 1.0});
  cfg.n_grid = {3200};
  cfg.replications = 1000;
  cfg.seed = 1111;
  const ReplicationSet set = run_replications(cfg, 0);
  const MCSummary s = summarize(cfg, set);
  if (!s.law) return {false, "no limit law"};
  const bool z_zero = s.law->pseudo_true[0] == 0.0;
  const double freq = s.selection.back().frequency;
  return {z_zero && freq >= 0.9, fmt::format("pseudo-true point ({:.6g}, {:.6g}); P(z_hat = 0) at n=3200 {:.4f}",
                                             s.law->pseudo_true[0], s.law->pseudo_true[1], freq)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / fmt::format("bridgelab_accept_{}", ::getpid());
  std::filesystem::create_directories(root);
  const auto config = root / "campaign.ini";
  {
    std::ofstream out(config);
    out << "[model]\np0 = 1\nrho0 = 1\nsigma = 1\n\n[penalty]\nfamily = bridge\ngamma = 0.5\n\n"
           "[schedule]\nc = 1\ne = 0.6\n\n[mc]\nn_grid = 50, 200, 800, 3200\nreplications = 2000\n"
           "seed = 20240601\n";
  }
  struct Run {
    std::string dir;
    std::size_t threads;
  };
  const std::vector<Run> runs{{"a", 1}, {"b", 1}, {"c", 8}};
  for (const auto& r : runs) {
    cli::CommandOptions opts;
    opts.config = config.string();
    opts.out = (root / r.dir).string();
    opts.threads = r.threads;
    std::ostringstream out, err;
    if (cli::cmd_mc(opts, out, err) != 0) return {false, "mc command failed: " + err.str()};
  }
  bool same = true;
  for (const char* f : {"replications.csv", "tail.csv", "summary.json"}) {
    const std::string a = slurp(root / "a" / f);
    same = same && !a.empty() && a == slurp(root / "b" / f) && a == slurp(root / "c" / f);
  }
  std::filesystem::remove_all(root);
  return {same, same ? "replications.csv, tail.csv, summary.json identical over two runs and threads 1 vs 8"
                     : "outputs differ"};
}

}  // namespace

int main() {
  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "scalar prox correctness", prox_correctness);
  report(3, "local-field decomposition identity", plaq_identity);
  report(4, "sparse consistency", sparse_consistency);
  report(5, "sparse-normal limit", sparse_normal_limit);
  report(6, "polynomial large-deviation probe", pldi_probe);
  report(7, "moment boundedness", moment_boundedness);
  report(8, "standard-regime moment convergence", standard_moment_convergence);
  report(9, "limit sampler sanity", limit_sampler_sanity);
  report(10, "penalty condition classifications", penalty_classifications);
  report(11, "pseudo-true regime", pseudo_true_regime);
  report(12, "determinism", determinism);
  fmt::print("{} of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
