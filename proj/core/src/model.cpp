#include "bridgelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bridgelab/errors.hpp"

namespace bridgelab {

TrueParameter::TrueParameter(std::size_t p0, Vector rho0, double rho_min)
    : p0_(p0), rho0_(std::move(rho0)), rho_min_(rho_min) {
  if (rho0_.size() < 1) throw InvalidInput("true parameter needs at least one nonzero coordinate");
  if (!(rho_min_ > 0.0)) throw InvalidInput("rho_min must be positive");
  for (Eigen::Index l = 0; l < rho0_.size(); ++l) {
    if (!std::isfinite(rho0_[l]) || std::abs(rho0_[l]) < rho_min_) {
      throw InvalidInput("rho0[" + std::to_string(l) + "] = " + std::to_string(rho0_[l]) +
                         " is below the nonzero margin rho_min = " + std::to_string(rho_min_));
    }
  }
}

Vector TrueParameter::theta() const {
  Vector t(static_cast<Eigen::Index>(p()));
  t.head(static_cast<Eigen::Index>(p0_)).setZero();
  t.tail(rho0_.size()) = rho0_;
  return t;
}

namespace {

// Design sequences below this are floating-point residue of exact identities.
constexpr double kRoundingFloor = 1e-9;

Matrix uniform_matrix(std::size_t n, std::size_t p, double half_width, Engine& rng) {
  std::uniform_real_distribution<double> unif(-half_width, half_width);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  // Row-major fill order so the draw sequence does not depend on storage.
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = unif(rng);
  return X;
}

Matrix standardized_design(std::size_t p, std::size_t n, Engine& rng) {
  if (n < p + 1) {
    throw InvalidSpec("standardized-orthonormal design needs n >= p + 1 (got n = " +
                      std::to_string(n) + ", p = " + std::to_string(p) + ")");
  }
  Matrix raw = uniform_matrix(n, p, 1.0, rng);
  raw.rowwise() -= raw.colwise().mean();
  Eigen::HouseholderQR<Matrix> qr(raw);
  const auto k = static_cast<Eigen::Index>(p);
  const auto rows = static_cast<Eigen::Index>(n);
  Matrix Q = qr.householderQ() * Matrix::Identity(rows, k);
  const Matrix R = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  if ((R.diagonal().cwiseAbs().array() < 1e-8).any()) {
    throw InvalidSpec("standardized-orthonormal design: centered draw is rank deficient");
  }
  // Canonical column signs: positive R diagonal.
  for (Eigen::Index j = 0; j < k; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return std::sqrt(static_cast<double>(n)) * Q;
}

}  // namespace

double max_row_norm(const Matrix& X) {
  if (X.rows() == 0) return 0.0;
  return X.rowwise().norm().maxCoeff();
}

Matrix generate_design(const DesignSpec& spec, std::size_t n, Seed seed) {
  if (spec.p < 1) throw InvalidSpec("design needs p >= 1");
  if (n < spec.p) {
    throw InvalidSpec("design needs n >= p (got n = " + std::to_string(n) +
                      ", p = " + std::to_string(spec.p) + ")");
  }
  Engine rng = make_engine(seed);
  switch (spec.kind) {
    case DesignKind::standardized_orthonormal:
      return standardized_design(spec.p, n, rng);
    case DesignKind::bounded_random_frozen: {
      if (!(spec.bound > 0.0)) throw InvalidSpec("bounded design needs a positive bound");
      // Entries in [-b/sqrt(p), b/sqrt(p)] keep every row inside the ball of radius b.
      return uniform_matrix(n, spec.p, spec.bound / std::sqrt(static_cast<double>(spec.p)), rng);
    }
    case DesignKind::explicit_matrix: {
      if (spec.rows.rows() == 0 || static_cast<std::size_t>(spec.rows.cols()) != spec.p) {
        throw InvalidSpec("explicit design rows must be non-empty with p columns");
      }
      if (!spec.rows.allFinite()) throw InvalidSpec("explicit design has non-finite entries");
      if (max_row_norm(spec.rows) > spec.bound) {
        throw InvalidSpec("explicit design row exceeds the declared bound " +
                          std::to_string(spec.bound));
      }
      Matrix X(static_cast<Eigen::Index>(n), spec.rows.cols());
      for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i) = spec.rows.row(i % spec.rows.rows());
      return X;
    }
  }
  throw InvalidSpec("unknown design kind");
}

Vector draw_noise(const NoiseSpec& noise, std::size_t n, Seed seed) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw InvalidInput("noise sigma must be finite and non-negative");
  }
  Vector eps = Vector::Zero(static_cast<Eigen::Index>(n));
  if (noise.sigma == 0.0) return eps;
  Engine rng = make_engine(seed);
  switch (noise.family) {
    case NoiseFamily::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& e : eps) e = noise.sigma * normal(rng);
      break;
    }
    case NoiseFamily::scaled_uniform: {
      // U(-sqrt3, sqrt3) has unit variance.
      std::uniform_real_distribution<double> unif(-std::sqrt(3.0), std::sqrt(3.0));
      for (auto& e : eps) e = noise.sigma * unif(rng);
      break;
    }
    case NoiseFamily::scaled_rademacher: {
      std::bernoulli_distribution coin(0.5);
      for (auto& e : eps) e = coin(rng) ? noise.sigma : -noise.sigma;
      break;
    }
  }
  return eps;
}

Dataset simulate_dataset(Matrix X, const TrueParameter& truth, const NoiseSpec& noise, Seed seed) {
  if (static_cast<std::size_t>(X.cols()) != truth.p()) {
    throw InvalidInput("design has " + std::to_string(X.cols()) +
                       " columns but the true parameter has dimension " +
                       std::to_string(truth.p()));
  }
  if (!X.allFinite()) throw InvalidInput("design has non-finite entries");
  Vector eps = draw_noise(noise, static_cast<std::size_t>(X.rows()), seed);
  Vector Y = X * truth.theta() + eps;
  return Dataset{std::move(X), std::move(Y), truth, std::move(eps)};
}

Vector simulate_responses(const Matrix& X, const TrueParameter& truth, const NoiseSpec& noise,
                          Seed seed) {
  return simulate_dataset(X, truth, noise, seed).Y;
}

GramReport gram(const Matrix& X, std::size_t p0, std::size_t p1) {
  if (static_cast<std::size_t>(X.cols()) != p0 + p1) {
    throw InvalidInput("block split p0 + p1 = " + std::to_string(p0 + p1) +
                       " does not match design with " + std::to_string(X.cols()) + " columns");
  }
  if (X.rows() == 0) throw InvalidInput("empty design");
  const double n = static_cast<double>(X.rows());
  const auto z = static_cast<Eigen::Index>(p0);
  const auto r = static_cast<Eigen::Index>(p1);
  GramReport g;
  g.C = (X.transpose() * X) / n;
  g.C = 0.5 * (g.C + g.C.transpose()).eval();
  g.D = g.C.topLeftCorner(z, z);
  g.B = g.C.bottomRightCorner(r, r);
  g.cross = (X.leftCols(z).transpose() * X.rightCols(r)) / std::sqrt(n);
  g.min_eig_C = min_eigenvalue(g.C);
  g.min_eig_D = min_eigenvalue(g.D);
  g.min_eig_B = min_eigenvalue(g.B);
  return g;
}

const ConditionSequence* ConditionReport::find(std::string_view id) const {
  for (const auto& c : conditions)
    if (c.id == id) return &c;
  return nullptr;
}

ConditionReport check_design_conditions(const std::vector<Matrix>& designs, std::size_t p0,
                                        const Matrix& C0, double delta,
                                        std::optional<PowerSchedule> q_n) {
  if (designs.size() < 3) throw InvalidInput("design condition check needs at least 3 grid points");
  const auto p = static_cast<std::size_t>(designs.front().cols());
  if (p0 > p) throw InvalidInput("p0 exceeds the design dimension");
  const std::size_t p1 = p - p0;
  if (static_cast<std::size_t>(C0.rows()) != p || static_cast<std::size_t>(C0.cols()) != p) {
    throw InvalidInput("C0 must be p x p");
  }
  if (!is_positive_definite(C0)) throw InvalidInput("C0 must be positive definite");

  std::vector<std::size_t> grid;
  for (const auto& X : designs) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (static_cast<std::size_t>(X.cols()) != p) throw InvalidInput("designs differ in dimension");
    if (!grid.empty() && n <= grid.back()) throw InvalidInput("n-grid must be strictly increasing");
    grid.push_back(n);
  }

  const auto z = static_cast<Eigen::Index>(p0);
  const auto r = static_cast<Eigen::Index>(p1);
  const Matrix D0 = C0.topLeftCorner(z, z);
  const Matrix B0 = C0.bottomRightCorner(r, r);

  ConditionSequence rate{"gram-convergence-rate", "n^delta |C_n - C0|", grid, {}, {},
                         {"standard-moment-convergence"}};
  ConditionSequence rows{"bounded-rows", "max_i |X_i|", grid, {}, {},
                         {"standard-moment-convergence", "zero-block-tail-bound",
                          "sparse-moment-convergence"}};
  ConditionSequence cross{"cross-block", "|n^-1/2 sum X_i^(z) (x) X_i^(rho)|", grid, {}, {},
                          {"sparse-moment-convergence"}};
  ConditionSequence cross_scaled{"cross-block-scaled",
                                 "|q_n^-1/2 n^-1/2 sum X_i^(z) (x) X_i^(rho)|", grid, {}, {},
                                 {"zero-block-tail-bound"}};
  ConditionSequence zero_block{"zero-block-gram", "n^delta |D_n - D0| (sufficient for D_n -> D0)",
                               grid, {}, {}, {"zero-block-tail-bound", "sparse-moment-convergence"}};
  ConditionSequence nonzero_block{"nonzero-block-gram-rate", "n^delta |B_n - B0|", grid, {}, {},
                                  {"sparse-moment-convergence"}};

  for (const auto& X : designs) {
    const GramReport g = gram(X, p0, p1);
    const double n = static_cast<double>(X.rows());
    const double scale = std::pow(n, delta);
    rate.values.push_back(scale * (g.C - C0).norm());
    rows.values.push_back(max_row_norm(X));
    if (p0 > 0) {
      const double c = g.cross.norm();
      cross.values.push_back(c);
      if (q_n) cross_scaled.values.push_back(c / std::sqrt(q_n->at(n)));
      zero_block.values.push_back(scale * (g.D - D0).norm());
    }
    nonzero_block.values.push_back(scale * (g.B - B0).norm());
  }

  ConditionReport report;
  auto push = [&report](ConditionSequence seq) {
    seq.verdict = classify_boundedness(seq.values, kRoundingFloor);
    report.conditions.push_back(std::move(seq));
  };
  push(std::move(rate));
  push(std::move(rows));
  if (p0 > 0) {
    push(std::move(cross));
    if (q_n) push(std::move(cross_scaled));
    push(std::move(zero_block));
  }
  push(std::move(nonzero_block));
  return report;
}

}  // namespace bridgelab
