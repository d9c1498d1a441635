#pragma once

#include <functional>

#include "egadm/numerics.hpp"

namespace egadm {

/// Proximal metric H for the x-subproblem.
///   Zero:                    H = 0 (closed forms need A = I)
///   ScaledIdentityMinusGram: H = tau I - gamma A^T A, positive definite when
///                            tau > gamma * lambda_max(A^T A)
struct MetricH {
  enum class Kind { Zero, ScaledIdentityMinusGram };

  Kind kind = Kind::Zero;
  double tau = 0.0;

  static MetricH zero() { return {}; }
  static MetricH scaled_identity_minus_gram(double tau) {
    return {Kind::ScaledIdentityMinusGram, tau};
  }
};

/// Coupling constraint A x + B y = b.
struct Coupling {
  LinearOperator A;
  LinearOperator B;
  Vector b;

  Index rows() const noexcept { return b.size(); }
  /// A x + B y - b
  Vector residual(const Vector& x, const Vector& y) const;
};

/// Arguments of the x-subproblem
///   argmin_x f(x) - <lambda, Ax + By - b> + gamma/2 |Ax + By - b|^2
///            + 1/2 |x - x_prev|_H^2
struct XSubproblem {
  const Coupling& coupling;
  const Vector& x_prev;
  const Vector& y;
  const Vector& lambda;
  double gamma;
  const MetricH& metric;
};

/// The prox-friendly block f over X. f is only touched through its value and
/// the x-subproblem solver.
struct ProxBlock {
  Index dimension = 0;
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const XSubproblem&)> prox_with_metric;
  /// Membership of X; used by tests, never in the solver loop.
  std::function<bool(const Vector&)> contains;
};

/// The smooth block g over Y with L_g-Lipschitz gradient.
struct SmoothBlock {
  Index dimension = 0;
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz_constant = 0.0;
  std::function<Vector(const Vector&)> project;
  std::function<bool(const Vector&)> contains;
};

/// min f(x) + g(y)  s.t.  A x + B y = b,  x in X,  y in Y.
/// Immutable after construction; the callables must be re-entrant.
class TwoBlockProblem {
 public:
  TwoBlockProblem(ProxBlock prox, SmoothBlock smooth, Coupling coupling);

  const ProxBlock& prox() const noexcept { return prox_; }
  const SmoothBlock& smooth() const noexcept { return smooth_; }
  const Coupling& coupling() const noexcept { return coupling_; }

  Index x_dim() const noexcept { return prox_.dimension; }
  Index y_dim() const noexcept { return smooth_.dimension; }
  Index constraint_dim() const noexcept { return coupling_.rows(); }

  /// Throws DimensionError unless x, y, lambda conform.
  void check_dims(const Vector& x, const Vector& y, const Vector& lambda) const;

 private:
  ProxBlock prox_;
  SmoothBlock smooth_;
  Coupling coupling_;
};

/// f(x) + g(y) - <lambda, Ax + By - b>
double lagrangian(const TwoBlockProblem& p, const Vector& x, const Vector& y,
                  const Vector& lambda);

/// lagrangian + gamma/2 |Ax + By - b|^2, gamma > 0
double augmented_lagrangian(const TwoBlockProblem& p, const Vector& x,
                            const Vector& y, const Vector& lambda,
                            double gamma);

/// grad_y of the Lagrangian: grad g(y) - B^T lambda
Vector lagrangian_grad_y(const TwoBlockProblem& p, const Vector& x,
                         const Vector& y, const Vector& lambda);

/// grad_y of the augmented Lagrangian: grad g(y) - B^T lambda + gamma B^T r
Vector augmented_lagrangian_grad_y(const TwoBlockProblem& p, const Vector& x,
                                   const Vector& y, const Vector& lambda,
                                   double gamma);

/// Stacked saddle operator F(x, z) = (grad g(y) - B^T lambda, Ax + By - b)
/// for z = (y, lambda).
Vector kkt_map(const TwoBlockProblem& p, const Vector& x, const Vector& y,
               const Vector& lambda);

/// Lipschitz constant of z -> F(x, z):
///   sqrt(max{2 L_g^2 + lambda_max(B^T B), 2 lambda_max(B^T B)}).
double khat_constant(const TwoBlockProblem& p, SpectralOptions opts = {});

}  // namespace egadm
