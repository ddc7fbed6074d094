#include <doctest.h>

#include <cmath>
#include <random>

#include "bridgelab/errors.hpp"
#include "bridgelab/montecarlo.hpp"

using namespace bridgelab;

namespace {

MCConfig small_config() {
  MCConfig cfg;
  cfg.truth = TrueParameter(1, Vector::Ones(1));
  cfg.design.p = 2;
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.6});
  cfg.n_grid = {40, 160};
  cfg.replications = 100;
  cfg.seed = 17;
  cfg.r_grid = {0.5, 1.0, 2.0, 4.0};
  return cfg;
}

ReplicationSet synthetic(const std::vector<double>& norms) {
  ReplicationSet set;
  set.n_grid = {1};
  set.replications = norms.size();
  set.p0 = 1;
  set.p1 = 1;
  std::vector<ReplicationRecord> recs;
  for (double x : norms) {
    ReplicationRecord r;
    r.n = 1;
    r.u = Vector::Constant(1, x);
    r.v = Vector::Zero(1);
    r.exact_zero = {x == 0.0};
    recs.push_back(r);
  }
  set.by_n.push_back(recs);
  return set;
}

}  // namespace

TEST_CASE("config validation") {
  MCConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.replications = 99;
  CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
  cfg = small_config();
  cfg.n_grid = {100, 50};
  CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
  cfg = small_config();
  cfg.r_grid = {1.0, 0.5};
  CHECK_THROWS_AS(cfg.validate(), InvalidSpec);
}

TEST_CASE("noiseless unpenalized campaign recovers the truth exactly") {
  MCConfig cfg = small_config();
  cfg.noise.sigma = 0.0;
  cfg.penalty = PenaltySpec::none();
  const ReplicationSet set = run_replications(cfg, 1);
  for (const auto& recs : set.by_n) {
    CHECK(recs.size() == 100);
    for (const auto& r : recs) {
      CHECK((r.theta - cfg.truth.theta()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(r.u.cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(r.v.cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("records are reproducible and schedule independent") {
  const MCConfig cfg = small_config();
  const ReplicationSet a = run_replications(cfg, 1);
  const ReplicationSet b = run_replications(cfg, 4);
  for (std::size_t k = 0; k < a.by_n.size(); ++k) {
    for (std::size_t i = 0; i < a.by_n[k].size(); ++i) {
      CHECK(a.by_n[k][i].theta == b.by_n[k][i].theta);
      CHECK(a.by_n[k][i].seed == b.by_n[k][i].seed);
      CHECK(a.by_n[k][i].rep == i);
    }
  }
}

TEST_CASE("records are consistent with theta and theta0") {
  const ReplicationSet set = run_replications(small_config(), 1);
  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    const double rn = std::sqrt(static_cast<double>(set.n_grid[k]));
    for (const auto& r : set.by_n[k]) {
      CHECK(r.u[0] == rn * r.theta[0]);
      CHECK(r.v[0] == doctest::Approx(rn * (r.theta[1] - 1.0)));
      CHECK(r.exact_zero[0] == (r.theta[0] == 0.0));
    }
  }
}

TEST_CASE("selection frequencies") {
  MCConfig cfg = small_config();
  cfg.penalty = PenaltySpec::none();
  auto curve = sparsity_curve(run_replications(cfg, 1));
  for (const auto& p : curve) CHECK(p.frequency == 0.0);

  cfg = small_config();
  cfg.noise.sigma = 0.0;
  curve = sparsity_curve(run_replications(cfg, 1));
  for (const auto& p : curve) CHECK(p.frequency == 1.0);

  curve = sparsity_curve(run_replications(small_config(), 1));
  for (const auto& p : curve) {
    CHECK(p.frequency >= 0.0);
    CHECK(p.frequency <= 1.0);
    CHECK(p.se == doctest::Approx(std::sqrt(p.frequency * (1.0 - p.frequency) / 100.0)));
  }
}

TEST_CASE("tail curves") {
  const auto zero = tail_curve(synthetic(std::vector<double>(200, 0.0)), {0.5, 1.0}, {2.0});
  CHECK(zero.curves[0].all_mass_at_zero);
  for (double p : zero.curves[0].p_hat) CHECK(p == 0.0);
  CHECK(zero.curves[0].pldi_max[0] == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> pareto(20000);
  for (auto& x : pareto) x = std::pow(1.0 - U(rng), -1.0 / 3.0);
  std::vector<double> r;
  for (double x = 1.0; x <= 8.0; x *= 1.25) r.push_back(x);
  const auto rep = tail_curve(synthetic(pareto), r, {2.0, 4.0});
  REQUIRE(rep.curves[0].slope_fit);
  CHECK(std::abs(rep.curves[0].slope_fit->slope + 3.0) <= 0.2);

  const auto real = tail_curve(run_replications(small_config(), 1), {0.1, 0.2, 0.5, 1.0, 2.0}, {2.0});
  for (const auto& c : real.curves) {
    for (std::size_t i = 0; i < c.p_hat.size(); ++i) {
      CHECK(c.p_hat[i] >= 0.0);
      CHECK(c.p_hat[i] <= 1.0);
      if (i > 0) CHECK(c.p_hat[i] <= c.p_hat[i - 1]);
    }
  }
}

TEST_CASE("moment trajectories and bootstrap") {
  const auto zero = moment_trajectory(synthetic(std::vector<double>(150, 0.0)), {2.0, 4.0}, 1);
  for (const auto& p : zero.points) CHECK(p.u_moment == 0.0);
  CHECK_THROWS_AS(moment_trajectory(synthetic({1.0}), {9.0}, 1), InvalidInput);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  std::vector<double> small(1000), big(4000);
  for (auto& x : small) x = N(rng);
  for (auto& x : big) x = N(rng);
  const double ratio = bootstrap_mean(small, 200, 5).second / bootstrap_mean(big, 200, 5).second;
  CHECK(std::abs(ratio - 2.0) <= 0.4);
}

TEST_CASE("standard regime with lambda0 = 0: second moment matches trace(sigma^2 B0^-1)") {
  MCConfig cfg;
  cfg.truth = TrueParameter(0, Vector::Ones(2));
  cfg.design.p = 2;
  cfg.penalty = PenaltySpec::bridge(1.0, {1.0, 0.25});
  cfg.n_grid = {200, 800};
  cfg.replications = 1000;
  cfg.seed = 5;
  const ReplicationSet set = run_replications(cfg, 0);
  const auto m = moment_trajectory(set, {2.0}, 1);
  const auto* last = m.find(800, 2.0);
  REQUIRE(last != nullptr);
  CHECK(std::abs(last->v_moment - 2.0) <= 3.0 * last->v_se);
}

TEST_CASE("KS distance") {
  const std::vector<double> a{0.1, 0.4, 0.2, 0.9};
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(ks_distance({0.0, 0.0}, {1.0, 1.0}) == 1.0);
}

TEST_CASE("limit comparisons") {
  MCConfig cfg = small_config();
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.5});
  cfg.n_grid = {400, 1600};
  cfg.replications = 400;
  const ReplicationSet set = run_replications(cfg, 0);
  const MCSummary s = summarize(cfg, set);
  REQUIRE(s.limit_distance);
  CHECK(s.limit_distance->regime == RegimeTag::sparse_normal);
  CHECK(std::abs(s.limit_distance->points.back().mean_gap_se[0]) <= 4.0);

  // unbiased limit at lambda0 = 0; the finite-n bias -n^(e-1/2)/4 is small next to the SE at e = 0.26
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.26});
  cfg.n_grid = {400, 6400};
  const MCSummary s0 = summarize(cfg, run_replications(cfg, 0));
  REQUIRE(s0.law);
  CHECK(s0.law->bias[0] == 0.0);
  CHECK(std::abs(s0.limit_distance->points.back().mean_gap_se[0]) <= 3.0);

  // wrong regime is refused
  const LimitLaw other = build_limit_law(regime_classify(0.5, {1.0, 0.6}), Matrix::Identity(2, 2), 1.0,
                                         cfg.truth, Box::default_for(2));
  CHECK_THROWS_AS(compare_to_limit(set, other), InvalidInput);

  // noiseless comparison has zero covariance on both sides
  cfg.n_grid = {400, 1600};
  cfg.noise.sigma = 0.0;
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.5});
  const MCSummary z = summarize(cfg, run_replications(cfg, 0));
  REQUIRE(z.limit_distance);
  CHECK(z.law->cov(0, 0) == 0.0);
  CHECK(std::abs(z.limit_distance->points.back().cov(0, 0)) <= 1e-20);
}

TEST_CASE("standard regime comparison against argmin samples") {
  MCConfig cfg;
  cfg.truth = TrueParameter(0, Vector::Ones(1));
  cfg.design.p = 1;
  cfg.penalty = PenaltySpec::bridge(1.0, {0.5, 0.5});
  cfg.n_grid = {800};
  cfg.replications = 500;
  const ReplicationSet set = run_replications(cfg, 0);
  const MCSummary s = summarize(cfg, set);
  REQUIRE(s.limit_distance);
  CHECK(s.limit_distance->points[0].ks[0] <= 0.12);
  const Matrix samples = sample_limit_argmin(*s.law, 300, 1);
  ReplicationSet self = set;
  self.by_n[0].resize(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    self.by_n[0][static_cast<std::size_t>(i)].v = samples.row(i).transpose();
    self.by_n[0][static_cast<std::size_t>(i)].u = Vector(0);
  }
  CHECK(compare_to_limit(self, *s.law, &samples).points[0].ks[0] == 0.0);
}
