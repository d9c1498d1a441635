#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <variant>

#include "egadm/errors.hpp"

namespace egadm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A linear map R^cols -> R^rows. Either a dense matrix, a scaled identity,
/// or a matrix-free pair of callables (apply, apply_transpose).
class LinearOperator {
 public:
  using Apply = std::function<Vector(const Vector&)>;

  LinearOperator() : LinearOperator(identity(0)) {}

  static LinearOperator dense(Matrix m);
  static LinearOperator identity(Index n, double scale = 1.0);
  static LinearOperator matrix_free(Index rows, Index cols, Apply apply,
                                    Apply apply_transpose);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  Vector apply(const Vector& v) const;
  Vector apply_transpose(const Vector& v) const;

  bool is_identity() const noexcept;
  /// Scale factor when the operator is a (scaled) identity.
  std::optional<double> identity_scale() const noexcept;
  /// Pointer to the stored matrix for dense operators, nullptr otherwise.
  const Matrix* dense_matrix() const noexcept;
  /// Materializes the operator column by column.
  Matrix to_dense() const;

 private:
  struct Dense {
    Matrix m;
  };
  struct ScaledIdentity {
    double scale;
  };
  struct MatrixFree {
    Apply apply;
    Apply apply_transpose;
  };

  LinearOperator(Index rows, Index cols,
                 std::variant<Dense, ScaledIdentity, MatrixFree> impl)
      : rows_(rows), cols_(cols), impl_(std::move(impl)) {}

  Index rows_;
  Index cols_;
  std::variant<Dense, ScaledIdentity, MatrixFree> impl_;
};

struct SpectralOptions {
  double tol = 1e-10;
  int max_iters = 5000;
};

/// Largest eigenvalue of M^T M by power iteration. Two starts are run, the
/// normalized all-ones vector and a fixed-seed Gaussian vector, and the larger
/// Rayleigh quotient is returned. Throws ConvergenceError (carrying the best
/// estimate) when either start fails to settle to relative change <= tol.
double spectral_norm_sq(const LinearOperator& m, SpectralOptions opts = {});
double spectral_norm_sq(const Matrix& m, SpectralOptions opts = {});

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class SpdFactorization {
 public:
  Index dimension() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

 private:
  friend SpdFactorization spd_factorize(const Matrix& m);
  explicit SpdFactorization(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

/// Throws DimensionError if m is not square or not symmetric to 1e-12
/// (relative to its largest entry) and NotPositiveDefinite on a pivot <= 0.
SpdFactorization spd_factorize(const Matrix& m);

/// Solves (L L^T) v = rhs by forward and back substitution.
Vector spd_solve(const SpdFactorization& f, const Vector& rhs);

bool all_finite(const Vector& v) noexcept;
bool all_finite(const Matrix& m) noexcept;

}  // namespace egadm
