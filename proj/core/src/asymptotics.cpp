#include "bridgelab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bridgelab/errors.hpp"
#include "bridgelab/solver.hpp"

namespace bridgelab {

std::string_view to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::standard: return "standard";
    case RegimeTag::sparse_normal: return "sparse-normal";
    case RegimeTag::sparse_slow: return "sparse-slow";
    case RegimeTag::pseudo_true: return "pseudo-true";
  }
  return "unknown";
}

namespace {

constexpr double kExponentTol = 1e-12;

bool same_exponent(double a, double b) { return std::abs(a - b) <= kExponentTol; }

// lim c n^(e - k): 0, c or +inf.
double power_limit(const TuningSchedule& s, double k) {
  if (same_exponent(s.e, k)) return s.c;
  return s.e < k ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

Regime regime_classify(double gamma, const TuningSchedule& schedule) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be positive");
  if (!(schedule.c > 0.0) || !std::isfinite(schedule.e)) {
    throw InvalidInput("tuning schedule needs c > 0 and a finite exponent");
  }
  const double e = schedule.e;
  const double min_rate = std::min(1.0, gamma) / 2.0;
  Regime r;
  r.gamma = gamma;
  r.schedule = schedule;
  r.limit_min_rate = power_limit(schedule, min_rate);
  r.limit_gamma_rate = power_limit(schedule, gamma / 2.0);
  r.limit_root_n = power_limit(schedule, 0.5);
  r.limit_n = power_limit(schedule, 1.0);

  if (e > 1.0 + kExponentTol) {
    throw UnsupportedRegime("lambda_n = c n^" + std::to_string(e) +
                            " grows faster than n; no limit theorem covers e > 1");
  }
  if (same_exponent(e, 1.0)) {
    r.tag = RegimeTag::pseudo_true;
    r.lambda0 = schedule.c;
  } else if (e < min_rate || same_exponent(e, min_rate)) {
    r.tag = RegimeTag::standard;
    r.lambda0 = same_exponent(e, min_rate) ? schedule.c : 0.0;
  } else if (gamma < 1.0 && (e < 0.5 || same_exponent(e, 0.5))) {
    r.tag = RegimeTag::sparse_normal;
    r.lambda0 = same_exponent(e, 0.5) ? schedule.c : 0.0;
  } else if (gamma < 1.0) {
    r.tag = RegimeTag::sparse_slow;
    r.lambda0 = 0.0;
  } else {
    throw UnsupportedRegime("gamma = " + std::to_string(gamma) + " >= 1 with lambda_n = c n^" +
                            std::to_string(e) + ": consistent, but no limit law is available");
  }
  return r;
}

RateDescriptors rate_descriptors(const Regime& regime) {
  RateDescriptors d;
  d.alpha_n = PowerSchedule{regime.schedule.c, regime.schedule.e - regime.gamma / 2.0};
  d.mixed_rates = d.alpha_n.e > kExponentTol;
  return d;
}

SparseLimit sparse_limit_params(double gamma, double lambda0, const Matrix& B0, double sigma2,
                                const Vector& rho0) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("sparse limit needs gamma in (0, 1)");
  if (!(lambda0 >= 0.0)) throw InvalidInput("lambda0 must be non-negative");
  if (!(sigma2 >= 0.0)) throw InvalidInput("sigma^2 must be non-negative");
  if (B0.rows() != rho0.size() || B0.cols() != rho0.size()) {
    throw InvalidInput("B0 must be p1 x p1 with p1 = dim(rho0)");
  }
  if (!is_positive_definite(B0)) throw InvalidInput("B0 is singular or not positive definite");
  SparseLimit out;
  out.upsilon.resize(rho0.size());
  for (Eigen::Index l = 0; l < rho0.size(); ++l) {
    if (rho0[l] == 0.0) throw InvalidInput("rho0 entries must be nonzero");
    const double sign = rho0[l] > 0.0 ? 1.0 : -1.0;
    out.upsilon[l] = gamma / 2.0 * sign * std::pow(std::abs(rho0[l]), gamma - 1.0);
  }
  const Eigen::LLT<Matrix> llt(B0);
  const Matrix B0inv = llt.solve(Matrix::Identity(B0.rows(), B0.cols()));
  out.bias = -lambda0 * llt.solve(out.upsilon);
  out.cov = sigma2 * 0.5 * (B0inv + B0inv.transpose());
  return out;
}

namespace {

// V0 as a separable quadratic: G = C0, h = W, penalty part per coordinate.
SeparableQuadratic limit_problem(const LimitFieldParams& prm, const Vector& W) {
  const auto p = prm.theta0.size();
  SeparableQuadratic q;
  q.G = prm.C0;
  q.h = W;
  q.linear = Vector::Zero(p);
  q.penalties.assign(static_cast<std::size_t>(p), ScalarPenalty::zero());
  if (prm.lambda0 == 0.0) return q;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double t = prm.theta0[j];
    const double sign = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    auto& pen = q.penalties[static_cast<std::size_t>(j)];
    if (prm.gamma > 1.0) {
      q.linear[j] = t == 0.0 ? 0.0 : prm.gamma * prm.lambda0 * sign * std::pow(std::abs(t), prm.gamma - 1.0);
    } else if (prm.gamma == 1.0) {
      if (t != 0.0) q.linear[j] = prm.lambda0 * sign;
      else pen = ScalarPenalty::bridge(prm.lambda0, 1.0);
    } else if (t == 0.0) {
      pen = ScalarPenalty::bridge(prm.lambda0, prm.gamma);
    }
  }
  return q;
}

void check_params(const LimitFieldParams& prm) {
  const auto p = prm.theta0.size();
  if (p == 0) throw InvalidInput("limit field needs p >= 1");
  if (prm.C0.rows() != p || prm.C0.cols() != p) throw InvalidInput("C0 must be p x p");
  if (!(prm.gamma > 0.0)) throw InvalidInput("gamma must be positive");
  if (!(prm.lambda0 >= 0.0)) throw InvalidInput("lambda0 must be non-negative");
}

bool has_nonsmooth_terms(const SeparableQuadratic& q) {
  return std::any_of(q.penalties.begin(), q.penalties.end(),
                     [](const ScalarPenalty& s) { return !s.is_zero(); });
}

}  // namespace

double limit_field_v0(const LimitFieldParams& params, const Vector& W, const Vector& u) {
  check_params(params);
  if (W.size() != params.theta0.size() || u.size() != params.theta0.size()) {
    throw InvalidInput("W and u must have dimension p");
  }
  const SeparableQuadratic q = limit_problem(params, W);
  return q.value(u);
}

Vector limit_argmin(const LimitFieldParams& params, const Vector& W) {
  check_params(params);
  const SeparableQuadratic q = limit_problem(params, W);
  // Smooth branches: stationarity 2 C0 u = 2 W - linear.
  const Vector smooth = least_squares(q.G, q.h - 0.5 * q.linear);
  if (!has_nonsmooth_terms(q)) return smooth;

  const auto p = q.h.size();
  const double reach = std::max(1e3, 100.0 * smooth.cwiseAbs().maxCoeff());
  const Box box = Box::uniform(static_cast<std::size_t>(p), -reach, reach);
  std::vector<Eigen::Index> penalized;
  for (Eigen::Index j = 0; j < p; ++j)
    if (!q.penalties[static_cast<std::size_t>(j)].is_zero()) penalized.push_back(j);
  const std::size_t patterned = std::min<std::size_t>(penalized.size(), 6);

  std::vector<Vector> starts{smooth, Vector::Zero(p)};
  for (std::size_t mask = 0; mask < (std::size_t{1} << patterned); ++mask) {
    Vector s = smooth;
    for (std::size_t k = 0; k < patterned; ++k)
      if (!((mask >> k) & 1U)) s[penalized[k]] = 0.0;
    starts.push_back(std::move(s));
  }
  SolverOptions opts;
  opts.tolerance = 1e-13;
  return multistart(q, box, starts, opts).theta;
}

Matrix sample_limit_argmin(const LimitFieldParams& params, double sigma2, std::size_t R, Seed seed) {
  check_params(params);
  if (!is_positive_definite(params.C0)) throw InvalidInput("C0 must be positive definite");
  if (!(sigma2 >= 0.0)) throw InvalidInput("sigma^2 must be non-negative");
  const auto p = params.theta0.size();
  const Matrix L = Eigen::LLT<Matrix>(params.C0).matrixL();
  const double sigma = std::sqrt(sigma2);
  Matrix out(static_cast<Eigen::Index>(R), p);
  for (std::size_t i = 0; i < R; ++i) {
    Engine rng = make_engine(derive_seed(seed, {static_cast<std::uint64_t>(Stream::limit), i}));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector xi(p);
    for (auto& x : xi) x = normal(rng);
    const Vector W = sigma * (L * xi);
    out.row(static_cast<Eigen::Index>(i)) = limit_argmin(params, W).transpose();
  }
  return out;
}

Matrix sample_limit_argmin(const LimitLaw& law, std::size_t R, Seed seed) {
  if (law.regime.tag != RegimeTag::standard) {
    throw InvalidInput("argmin(V0) sampling applies to the standard regime only");
  }
  LimitFieldParams prm{law.regime.gamma, law.regime.lambda0, law.C0, law.theta0};
  return sample_limit_argmin(prm, law.sigma2, R, seed);
}

PseudoTrue pseudo_true(const Matrix& C0, double lambda0, double gamma, const Vector& theta0,
                       const Box& box) {
  const auto p = theta0.size();
  if (C0.rows() != p || C0.cols() != p) throw InvalidInput("C0 must be p x p");
  if (!(lambda0 >= 0.0)) throw InvalidInput("lambda0 must be non-negative");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  box.validate();
  if (box.lo.size() != p) throw InvalidInput("box dimension does not match theta0");
  PseudoTrue out;
  if (lambda0 == 0.0) {
    out.theta = theta0;
  } else {
    SeparableQuadratic q;
    q.G = C0;
    q.h = C0 * theta0;
    q.constant = theta0.dot(C0 * theta0);
    q.penalties.assign(static_cast<std::size_t>(p), ScalarPenalty::bridge(lambda0, gamma));
    const std::size_t patterned = std::min<std::size_t>(static_cast<std::size_t>(p), 6);
    std::vector<Vector> starts{theta0, Vector::Zero(p)};
    for (std::size_t mask = 0; mask < (std::size_t{1} << patterned); ++mask) {
      Vector s = theta0;
      for (std::size_t k = 0; k < patterned; ++k)
        if (!((mask >> k) & 1U)) s[static_cast<Eigen::Index>(k)] = 0.0;
      starts.push_back(std::move(s));
    }
    SolverOptions opts;
    opts.tolerance = 1e-14;
    out.theta = multistart(q, box, starts, opts).theta;
  }
  for (Eigen::Index j = 0; j < p; ++j) out.exact_zero.push_back(out.theta[j] == 0.0);
  return out;
}

LimitLaw build_limit_law(const Regime& regime, const Matrix& C0, double sigma2,
                         const TrueParameter& truth, const Box& box) {
  const auto p = static_cast<Eigen::Index>(truth.p());
  if (C0.rows() != p || C0.cols() != p) throw InvalidInput("C0 must be p x p");
  if (!is_positive_definite(C0)) throw InvalidInput("C0 must be positive definite");
  LimitLaw law;
  law.regime = regime;
  law.sigma2 = sigma2;
  law.C0 = C0;
  law.theta0 = truth.theta();
  law.p0 = truth.p0();
  law.rates = rate_descriptors(regime);
  const auto p1 = static_cast<Eigen::Index>(truth.p1());
  const Matrix B0 = C0.bottomRightCorner(p1, p1);
  switch (regime.tag) {
    case RegimeTag::standard:
      break;
    case RegimeTag::sparse_normal: {
      const SparseLimit s = sparse_limit_params(regime.gamma, regime.lambda0, B0, sigma2, truth.rho0());
      law.upsilon = s.upsilon;
      law.bias = s.bias;
      law.cov = s.cov;
      break;
    }
    case RegimeTag::sparse_slow: {
      const SparseLimit s = sparse_limit_params(regime.gamma, 1.0, B0, sigma2, truth.rho0());
      law.upsilon = s.upsilon;
      law.drift = s.bias;
      break;
    }
    case RegimeTag::pseudo_true: {
      PseudoTrue pt = pseudo_true(C0, regime.lambda0, regime.gamma, law.theta0, box);
      law.pseudo_true = std::move(pt.theta);
      law.pseudo_true_zero = std::move(pt.exact_zero);
      break;
    }
  }
  return law;
}

}  // namespace bridgelab
