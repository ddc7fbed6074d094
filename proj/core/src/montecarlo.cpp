#include "bridgelab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "bridgelab/contrast.hpp"
#include "bridgelab/errors.hpp"

namespace bridgelab {

void MCConfig::validate() const {
  penalty.validate();
  if (design.p != truth.p()) throw InvalidSpec("design dimension p must equal p0 + p1");
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) throw InvalidSpec("sigma must be >= 0");
  if (replications < kMinReplications) throw InvalidSpec("replications must be at least 100");
  if (n_grid.empty()) throw InvalidSpec("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw InvalidSpec("n-grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidSpec("n-grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) throw InvalidSpec("r-grid entries must be positive");
    if (i > 0 && r_grid[i] <= r_grid[i - 1]) throw InvalidSpec("r-grid must be strictly increasing");
  }
  for (double q : q_list)
    if (!(q > 0.0 && q <= 8.0)) throw InvalidSpec("moment orders must lie in (0, 8]");
  for (double L : L_list)
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidSpec("L-list entries must be positive");
  if (box) {
    box->validate();
    if (box->dim() != truth.p()) throw InvalidSpec("box dimension must equal p");
    if (!box->contains(truth.theta())) throw InvalidSpec("theta0 must lie inside the box");
  }
  if (!(solver.tolerance > 0.0) || solver.max_sweeps == 0) throw InvalidSpec("invalid solver options");
}

Box MCConfig::effective_box() const { return box ? *box : Box::default_for(truth.p()); }

Seed replication_seed(Seed master, std::size_t n, std::size_t rep) {
  return derive_seed(master, {static_cast<std::uint64_t>(Stream::noise), n, rep});
}

Seed design_seed(Seed master, std::size_t n) {
  return derive_seed(master, {static_cast<std::uint64_t>(Stream::design), n});
}

namespace {

ReplicationRecord replicate(const MCConfig& cfg, const Matrix& X, const Box& box, std::size_t n,
                            std::size_t rep) {
  ReplicationRecord rec;
  rec.n = n;
  rec.rep = rep;
  rec.seed = replication_seed(cfg.seed, n, rep);
  Dataset data = simulate_dataset(X, cfg.truth, cfg.noise, rec.seed);
  const Contrast contrast(std::move(data), cfg.penalty, box);
  const EstimateResult est = minimize(contrast, box, cfg.solver);
  rec.theta = est.theta;
  rec.exact_zero = est.exact_zero;
  rec.objective = est.objective;
  rec.converged = est.converged;
  rec.on_boundary = est.on_boundary;
  const double root_n = std::sqrt(static_cast<double>(n));
  rec.u = root_n * est.z;
  rec.v = root_n * (est.rho - cfg.truth.rho0());
  return rec;
}

}  // namespace

ReplicationSet run_replications(const MCConfig& cfg, std::size_t threads) {
  cfg.validate();
  const Box box = cfg.effective_box();
  ReplicationSet set;
  set.n_grid = cfg.n_grid;
  set.replications = cfg.replications;
  set.p0 = cfg.truth.p0();
  set.p1 = cfg.truth.p1();
  set.theta0 = cfg.truth.theta();
  if (cfg.penalty.family == PenaltyFamily::bridge) {
    try {
      set.regime = regime_classify(cfg.penalty.gamma, cfg.penalty.schedule);
    } catch (const UnsupportedRegime&) {
      set.warnings.push_back("penalty schedule has no supported limit regime");
    }
  }
  for (std::size_t n : cfg.n_grid) {
    set.lambda.push_back(cfg.penalty.family == PenaltyFamily::none ? 0.0 : cfg.penalty.lambda_at(n));
    set.designs.push_back(generate_design(cfg.design, n, design_seed(cfg.seed, n)));
  }

  const std::size_t R = cfg.replications;
  const std::size_t total = R * cfg.n_grid.size();
  set.by_n.assign(cfg.n_grid.size(), std::vector<ReplicationRecord>(R));
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t k = job / R;
      const std::size_t rep = job % R;
      try {
        set.by_n[k][rep] = replicate(cfg, set.designs[k], box, cfg.n_grid[k], rep);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < cfg.n_grid.size(); ++k) {
    std::size_t bad = 0, boundary = 0;
    for (const auto& rec : set.by_n[k]) {
      if (rec.n != cfg.n_grid[k]) throw std::logic_error("incomplete replication set");
      bad += rec.converged ? 0 : 1;
      boundary += rec.on_boundary ? 1 : 0;
    }
    set.nonconverged.push_back(bad);
    set.boundary_hits.push_back(boundary);
    if (static_cast<double>(bad) > 0.01 * static_cast<double>(R)) {
      set.warnings.push_back("n=" + std::to_string(cfg.n_grid[k]) + ": " + std::to_string(bad) +
                             " of " + std::to_string(R) + " solves did not converge");
    }
    if (boundary > 0) {
      set.warnings.push_back("n=" + std::to_string(cfg.n_grid[k]) + ": " + std::to_string(boundary) +
                             " estimates on the box boundary");
    }
  }
  return set;
}

double binomial_se(double p_hat, std::size_t R) {
  return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(R));
}

TailCurve tail_curve_from_norms(std::size_t n, const std::vector<double>& norms,
                                const std::vector<double>& r_grid, const std::vector<double>& L_list) {
  if (norms.empty()) throw InvalidInput("tail curve needs at least one sample");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw InvalidInput("r-grid entries must be positive");
    if (i > 0 && r_grid[i] <= r_grid[i - 1]) throw InvalidInput("r-grid must be strictly increasing");
  }
  const std::size_t R = norms.size();
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  TailCurve tc;
  tc.n = n;
  tc.r = r_grid;
  tc.all_mass_at_zero = sorted.back() == 0.0;
  const double cutoff = 10.0 / static_cast<double>(R);
  std::vector<double> log_r, log_p;
  for (double r : r_grid) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), r);
    const double p = static_cast<double>(sorted.end() - first) / static_cast<double>(R);
    tc.p_hat.push_back(p);
    tc.se.push_back(binomial_se(p, R));
    const bool informative = p >= cutoff;
    tc.informative.push_back(informative);
    if (informative) {
      log_r.push_back(std::log(r));
      log_p.push_back(std::log(p));
    }
  }
  tc.slope_fit = fit_line(log_r, log_p);
  for (double L : L_list) {
    std::vector<double> row;
    double best = 0.0;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      row.push_back(std::pow(r_grid[i], L) * tc.p_hat[i]);
      if (tc.informative[i]) best = std::max(best, row.back());
    }
    tc.rL_p_hat.push_back(std::move(row));
    tc.pldi_max.push_back(best);
  }
  return tc;
}

TailReport tail_curve(const ReplicationSet& set, const std::vector<double>& r_grid,
                      const std::vector<double>& L_list) {
  TailReport rep;
  rep.L = L_list;
  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    std::vector<double> norms;
    norms.reserve(set.by_n[k].size());
    for (const auto& rec : set.by_n[k]) norms.push_back(rec.u.norm());
    rep.curves.push_back(tail_curve_from_norms(set.n_grid[k], norms, r_grid, L_list));
  }
  for (std::size_t l = 0; l < L_list.size(); ++l) {
    std::vector<double> seq;
    for (const auto& c : rep.curves) seq.push_back(c.pldi_max[l]);
    const Boundedness b = classify_boundedness(seq);
    if (b == Boundedness::plausibly_bounded &&
        (!rep.largest_bounded_L || L_list[l] > *rep.largest_bounded_L)) {
      rep.largest_bounded_L = L_list[l];
    }
    rep.pldi_by_n.push_back(std::move(seq));
    rep.pldi_verdict.push_back(b);
  }
  return rep;
}

std::vector<SelectionPoint> sparsity_curve(const ReplicationSet& set) {
  if (set.p0 == 0) throw InvalidInput("selection frequencies need p0 >= 1");
  std::vector<SelectionPoint> out;
  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    const auto& recs = set.by_n[k];
    const std::size_t R = recs.size();
    SelectionPoint pt;
    pt.n = set.n_grid[k];
    std::size_t all = 0;
    std::vector<std::size_t> per(set.p0, 0);
    for (const auto& rec : recs) {
      bool every = true;
      for (std::size_t j = 0; j < set.p0; ++j) {
        if (rec.exact_zero[j]) ++per[j];
        else every = false;
      }
      all += every ? 1 : 0;
    }
    pt.frequency = static_cast<double>(all) / static_cast<double>(R);
    pt.se = binomial_se(pt.frequency, R);
    for (std::size_t j = 0; j < set.p0; ++j) {
      pt.per_coordinate.push_back(static_cast<double>(per[j]) / static_cast<double>(R));
      pt.per_coordinate_se.push_back(binomial_se(pt.per_coordinate.back(), R));
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::pair<double, double> bootstrap_mean(const std::vector<double>& values, std::size_t resamples,
                                         Seed seed) {
  if (values.empty()) throw InvalidInput("bootstrap needs at least one value");
  const std::size_t R = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(R);
  if (resamples < 2) return {mean, 0.0};
  Engine rng = make_engine(seed);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < R; ++i) s += values[static_cast<std::size_t>(rng() % R)];
    m = s / static_cast<double>(R);
  }
  const double mbar = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(resamples);
  double ss = 0.0;
  for (double m : means) ss += (m - mbar) * (m - mbar);
  return {mean, std::sqrt(ss / static_cast<double>(resamples - 1))};
}

const MomentPoint* MomentTrajectory::find(std::size_t n, double q) const {
  for (const auto& p : points)
    if (p.n == n && p.q == q) return &p;
  return nullptr;
}

namespace {

double max_min_ratio(const std::vector<double>& seq) {
  const auto [lo, hi] = std::minmax_element(seq.begin(), seq.end());
  if (*hi == 0.0) return 1.0;
  if (*lo == 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

// Flagged only when the sequence both spreads by more than x2 and keeps rising.
Boundedness moment_verdict(const std::vector<double>& seq) {
  if (seq.size() < 2) return Boundedness::plausibly_bounded;
  const bool rising = strictly_increasing_top_half(seq);
  return max_min_ratio(seq) > 2.0 && rising ? Boundedness::growing : Boundedness::plausibly_bounded;
}

}  // namespace

MomentTrajectory moment_trajectory(const ReplicationSet& set, const std::vector<double>& q_list,
                                   Seed seed) {
  for (double q : q_list)
    if (!(q > 0.0 && q <= 8.0)) throw InvalidInput("moment orders must lie in (0, 8]");
  MomentTrajectory traj;
  std::vector<std::vector<double>> u_seq(q_list.size()), v_seq(q_list.size());
  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    const auto& recs = set.by_n[k];
    for (std::size_t iq = 0; iq < q_list.size(); ++iq) {
      const double q = q_list[iq];
      std::vector<double> uq, vq;
      uq.reserve(recs.size());
      vq.reserve(recs.size());
      for (const auto& rec : recs) {
        uq.push_back(std::pow(rec.u.norm(), q));
        vq.push_back(std::pow(rec.v.norm(), q));
      }
      const auto qbits = std::bit_cast<std::uint64_t>(q);
      const auto stream = static_cast<std::uint64_t>(Stream::bootstrap);
      MomentPoint pt;
      pt.n = set.n_grid[k];
      pt.q = q;
      std::tie(pt.u_moment, pt.u_se) =
          bootstrap_mean(uq, kBootstrapResamples, derive_seed(seed, {stream, pt.n, qbits, 0}));
      std::tie(pt.v_moment, pt.v_se) =
          bootstrap_mean(vq, kBootstrapResamples, derive_seed(seed, {stream, pt.n, qbits, 1}));
      u_seq[iq].push_back(pt.u_moment);
      v_seq[iq].push_back(pt.v_moment);
      traj.points.push_back(pt);
    }
  }
  for (std::size_t iq = 0; iq < q_list.size(); ++iq) {
    MomentVerdict mv;
    mv.q = q_list[iq];
    mv.u_ratio = max_min_ratio(u_seq[iq]);
    mv.u_verdict = moment_verdict(u_seq[iq]);
    mv.v_ratio = max_min_ratio(v_seq[iq]);
    mv.v_verdict = moment_verdict(v_seq[iq]);
    traj.verdicts.push_back(mv);
  }
  return traj;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("KS distance needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

struct Moments {
  Vector mean;
  Vector se;
  Matrix cov;
};

Moments sample_moments(const std::vector<Vector>& xs) {
  const auto d = xs.front().size();
  const double R = static_cast<double>(xs.size());
  Moments m;
  m.mean = Vector::Zero(d);
  for (const auto& x : xs) m.mean += x;
  m.mean /= R;
  m.cov = Matrix::Zero(d, d);
  for (const auto& x : xs) m.cov += (x - m.mean) * (x - m.mean).transpose();
  m.cov /= std::max(1.0, R - 1.0);
  m.se = (m.cov.diagonal() / R).cwiseSqrt();
  return m;
}

Vector gap_in_se(const Vector& mean, const Vector& se, const Vector& target) {
  Vector g(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double diff = mean[i] - target[i];
    g[i] = se[i] > 0.0 ? diff / se[i]
                       : (diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff));
  }
  return g;
}

double relative_gap(const Matrix& est, const Matrix& target) {
  const double denom = target.norm();
  const double diff = (est - target).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace

LimitDistanceReport compare_to_limit(const ReplicationSet& set, const LimitLaw& law,
                                     const Matrix* limit_samples) {
  if (!set.regime || set.regime->tag != law.regime.tag) {
    throw InvalidInput("replication regime does not match the limit law");
  }
  if (law.theta0.size() != set.theta0.size() || law.theta0 != set.theta0) {
    throw InvalidInput("limit law and replications use different true parameters");
  }
  LimitDistanceReport rep;
  rep.regime = law.regime.tag;
  const auto p = set.theta0.size();
  switch (law.regime.tag) {
    case RegimeTag::sparse_normal:
      rep.target_mean = law.bias;
      rep.target_cov = law.cov;
      break;
    case RegimeTag::sparse_slow:
      rep.target_mean = law.drift;
      rep.notes.push_back("location check only: the limit of (n / lambda_n)(rho_hat - rho0) is degenerate");
      break;
    case RegimeTag::pseudo_true:
      rep.target_mean = law.pseudo_true;
      if (std::none_of(law.pseudo_true_zero.begin(), law.pseudo_true_zero.end(), [](bool b) { return b; })) {
        rep.notes.push_back("pseudo-true point has no zero coordinates; zero-block check skipped");
      }
      break;
    case RegimeTag::standard:
      if (limit_samples == nullptr) throw InvalidInput("standard regime comparison needs limit samples");
      if (limit_samples->cols() != p || limit_samples->rows() == 0) {
        throw InvalidInput("limit samples must be R x p");
      }
      rep.target_mean = limit_samples->colwise().mean().transpose();
      break;
  }

  for (std::size_t k = 0; k < set.n_grid.size(); ++k) {
    const auto& recs = set.by_n[k];
    const double n = static_cast<double>(set.n_grid[k]);
    LimitDistancePoint pt;
    pt.n = set.n_grid[k];
    std::vector<Vector> xs;
    xs.reserve(recs.size());
    switch (law.regime.tag) {
      case RegimeTag::sparse_normal:
        for (const auto& r : recs) xs.push_back(r.v);
        break;
      case RegimeTag::sparse_slow: {
        const double scale = std::sqrt(n) / set.lambda[k];
        for (const auto& r : recs) xs.push_back(scale * r.v);
        break;
      }
      case RegimeTag::pseudo_true:
        for (const auto& r : recs) xs.push_back(r.theta);
        break;
      case RegimeTag::standard:
        for (const auto& r : recs) {
          Vector w(p);
          w << r.u, r.v;
          xs.push_back(std::move(w));
        }
        break;
    }
    const Moments m = sample_moments(xs);
    pt.mean = m.mean;
    pt.se = m.se;
    pt.cov = m.cov;
    pt.mean_gap_se = gap_in_se(m.mean, m.se, rep.target_mean);
    if (law.regime.tag == RegimeTag::sparse_normal) pt.cov_relative_gap = relative_gap(m.cov, law.cov);
    if (law.regime.tag == RegimeTag::standard) {
      for (Eigen::Index j = 0; j < p; ++j) {
        std::vector<double> a, b;
        for (const auto& x : xs) a.push_back(x[j]);
        for (Eigen::Index i = 0; i < limit_samples->rows(); ++i) b.push_back((*limit_samples)(i, j));
        pt.ks.push_back(ks_distance(std::move(a), std::move(b)));
      }
    }
    if (law.regime.tag == RegimeTag::pseudo_true) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (!law.pseudo_true_zero[static_cast<std::size_t>(j)]) continue;
        std::size_t zeros = 0;
        for (const auto& r : recs) zeros += r.theta[j] == 0.0 ? 1 : 0;
        pt.zero_frequency.push_back(static_cast<double>(zeros) / static_cast<double>(recs.size()));
      }
    }
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

MCSummary summarize(const MCConfig& cfg, const ReplicationSet& set) {
  MCSummary s;
  s.warnings = set.warnings;
  if (set.p0 > 0) s.selection = sparsity_curve(set);
  s.moments = moment_trajectory(set, cfg.q_list, cfg.seed);
  if (!cfg.r_grid.empty()) s.tail = tail_curve(set, cfg.r_grid, cfg.L_list);
  if (!set.regime) return s;
  try {
    const Matrix C0 = gram(set.designs.back(), set.p0, set.p1).C;
    s.law = build_limit_law(*set.regime, C0, cfg.noise.sigma * cfg.noise.sigma, cfg.truth,
                            cfg.effective_box());
    if (set.regime->tag == RegimeTag::standard) {
      const Matrix samples = sample_limit_argmin(
          *s.law, cfg.replications, derive_seed(cfg.seed, {static_cast<std::uint64_t>(Stream::limit)}));
      s.limit_distance = compare_to_limit(set, *s.law, &samples);
    } else {
      s.limit_distance = compare_to_limit(set, *s.law);
    }
  } catch (const InvalidInput& e) {
    s.warnings.push_back(std::string("limit law unavailable: ") + e.what());
  }
  return s;
}

}  // namespace bridgelab
