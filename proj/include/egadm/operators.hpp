#pragma once

#include "egadm/numerics.hpp"
#include "egadm/problem.hpp"

namespace egadm {

/// Soft thresholding sign(z) .* max(|z| - tau, 0). Solves
/// argmin_x tau |x|_1 + 1/2 |x - z|^2. Ties at |z_i| = tau map to 0.
Vector shrink(const Vector& z, double tau);

/// Per-coordinate thresholds, all >= 0.
Vector shrink(const Vector& z, const Vector& tau);

/// Euclidean projection onto {y : A y = b} for full-row-rank A:
///   w + A^T (A A^T)^{-1} (b - A w).
/// A A^T is factored once at construction.
class AffineProjector {
 public:
  /// Throws NotPositiveDefinite when A is rank deficient.
  AffineProjector(Matrix a, Vector b);

  Vector project(const Vector& w) const;
  /// |A y - b| <= tol * (1 + |b|)
  bool contains(const Vector& y, double tol = 1e-9) const;

  const Matrix& A() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }

 private:
  Matrix a_;
  Vector b_;
  SpdFactorization gram_;
};

/// Exact minimizer of the x-subproblem for f(x) = sum_i w_i |x_i|.
///
/// Supported combinations:
///   A = I, H = Zero:
///     x = shrink(b - B y + lambda / gamma, w / gamma)
///   any A, H = tau I - gamma A^T A:
///     x = shrink(x_prev - (gamma A^T r_prev - A^T lambda) / tau, w / tau),
///     r_prev = A x_prev + B y - b
/// Anything else throws std::invalid_argument.
Vector solve_x_subproblem_l1(const Vector& weights, const XSubproblem& sub);
Vector solve_x_subproblem_l1(double weight, const XSubproblem& sub);

/// Throws std::invalid_argument unless H = tau I - gamma A^T A is positive
/// definite, i.e. tau > gamma * lambda_max(A^T A). Zero is always accepted.
void validate_metric(const MetricH& h, const LinearOperator& a, double gamma);

}  // namespace egadm
