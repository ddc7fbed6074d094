#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/diagnostics.hpp"
#include "bridgelab/linalg.hpp"
#include "bridgelab/rng.hpp"
#include "bridgelab/schedule.hpp"

namespace bridgelab {

// theta0 = (z0, rho0): a zero block of length p0 followed by a nonzero block.
class TrueParameter {
 public:
  static constexpr double kDefaultRhoMin = 0.5;

  TrueParameter(std::size_t p0, Vector rho0, double rho_min = kDefaultRhoMin);

  std::size_t p0() const { return p0_; }
  std::size_t p1() const { return static_cast<std::size_t>(rho0_.size()); }
  std::size_t p() const { return p0() + p1(); }
  double rho_min() const { return rho_min_; }

  Vector z0() const { return Vector::Zero(static_cast<Eigen::Index>(p0_)); }
  const Vector& rho0() const { return rho0_; }
  Vector theta() const;

  friend bool operator==(const TrueParameter& a, const TrueParameter& b) {
    return a.p0_ == b.p0_ && a.rho0_ == b.rho0_ && a.rho_min_ == b.rho_min_;
  }

 private:
  std::size_t p0_;
  Vector rho0_;
  double rho_min_;
};

enum class DesignKind { standardized_orthonormal, explicit_matrix, bounded_random_frozen };

struct DesignSpec {
  DesignKind kind = DesignKind::standardized_orthonormal;
  std::size_t p = 1;
  // Euclidean bound on each row. Enforced for bounded-random-frozen and
  // validated for explicit-matrix; standardized designs only report it.
  double bound = 10.0;
  // Rows for explicit-matrix; cycled when n exceeds the row count.
  Matrix rows;

  friend bool operator==(const DesignSpec& a, const DesignSpec& b) {
    return a.kind == b.kind && a.p == b.p && a.bound == b.bound && a.rows.rows() == b.rows.rows() &&
           a.rows.cols() == b.rows.cols() && a.rows == b.rows;
  }
};

enum class NoiseFamily { gaussian, scaled_uniform, scaled_rademacher };

// Zero-mean noise with standard deviation sigma; every family has all
// moments finite.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian;
  double sigma = 1.0;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct Dataset {
  Matrix X;
  Vector Y;
  TrueParameter truth;
  // The realized noise Y - theta0' X. Present only for simulated data.
  std::optional<Vector> noise;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
  std::size_t p0() const { return truth.p0(); }
  std::size_t p1() const { return truth.p1(); }
};

// Gram matrix C_n = n^-1 sum X_i X_i' and its blocks under the (p0, p1) split.
struct GramReport {
  Matrix C;      // p x p
  Matrix D;      // upper-left p0 x p0
  Matrix B;      // bottom-right p1 x p1
  Matrix cross;  // p0 x p1: n^-1/2 sum X_i^(z) X_i^(rho)'
  double min_eig_C = 0.0;
  double min_eig_D = 0.0;
  double min_eig_B = 0.0;
};

Matrix generate_design(const DesignSpec& spec, std::size_t n, Seed seed);

// Noise draws for n observations.
Vector draw_noise(const NoiseSpec& noise, std::size_t n, Seed seed);

Vector simulate_responses(const Matrix& X, const TrueParameter& truth, const NoiseSpec& noise,
                          Seed seed);

// simulate_responses plus bookkeeping: keeps the realized noise.
Dataset simulate_dataset(Matrix X, const TrueParameter& truth, const NoiseSpec& noise, Seed seed);

GramReport gram(const Matrix& X, std::size_t p0, std::size_t p1);

// Largest Euclidean row norm.
double max_row_norm(const Matrix& X);

struct ConditionSequence {
  std::string id;
  std::string description;
  std::vector<std::size_t> n_grid;
  std::vector<double> values;
  Boundedness verdict = Boundedness::plausibly_bounded;
  std::vector<std::string> required_by;
};

struct ConditionReport {
  std::vector<ConditionSequence> conditions;

  const ConditionSequence* find(std::string_view id) const;
};

// Finite-n diagnostics for the design assumptions, evaluated on a sequence of
// designs (one per n, n = rows). `q_n` enables the scaled cross-block check.
ConditionReport check_design_conditions(const std::vector<Matrix>& designs, std::size_t p0,
                                        const Matrix& C0, double delta,
                                        std::optional<PowerSchedule> q_n = std::nullopt);

}  // namespace bridgelab
