#include "egadm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace egadm {

Vector Coupling::residual(const Vector& x, const Vector& y) const {
  return A.apply(x) + B.apply(y) - b;
}

TwoBlockProblem::TwoBlockProblem(ProxBlock prox, SmoothBlock smooth,
                                 Coupling coupling)
    : prox_(std::move(prox)),
      smooth_(std::move(smooth)),
      coupling_(std::move(coupling)) {
  const auto& c = coupling_;
  if (c.A.rows() != c.rows() || c.B.rows() != c.rows()) {
    throw DimensionError("TwoBlockProblem: A, B and b disagree on row count");
  }
  if (c.A.cols() != prox_.dimension) {
    throw DimensionError("TwoBlockProblem: A has " + std::to_string(c.A.cols()) +
                         " columns but the prox block has dimension " +
                         std::to_string(prox_.dimension));
  }
  if (c.B.cols() != smooth_.dimension) {
    throw DimensionError("TwoBlockProblem: B has " + std::to_string(c.B.cols()) +
                         " columns but the smooth block has dimension " +
                         std::to_string(smooth_.dimension));
  }
  if (!prox_.evaluate || !prox_.prox_with_metric) {
    throw std::invalid_argument("TwoBlockProblem: prox block is incomplete");
  }
  if (!smooth_.evaluate || !smooth_.gradient || !smooth_.project) {
    throw std::invalid_argument("TwoBlockProblem: smooth block is incomplete");
  }
  if (!(smooth_.lipschitz_constant >= 0.0)) {
    throw std::invalid_argument("TwoBlockProblem: negative Lipschitz constant");
  }
}

void TwoBlockProblem::check_dims(const Vector& x, const Vector& y,
                                 const Vector& lambda) const {
  if (x.size() != x_dim() || y.size() != y_dim() ||
      lambda.size() != constraint_dim()) {
    throw DimensionError(
        "expected (x, y, lambda) of lengths (" + std::to_string(x_dim()) +
        ", " + std::to_string(y_dim()) + ", " +
        std::to_string(constraint_dim()) + "), got (" +
        std::to_string(x.size()) + ", " + std::to_string(y.size()) + ", " +
        std::to_string(lambda.size()) + ")");
  }
}

double lagrangian(const TwoBlockProblem& p, const Vector& x, const Vector& y,
                  const Vector& lambda) {
  p.check_dims(x, y, lambda);
  return p.prox().evaluate(x) + p.smooth().evaluate(y) -
         lambda.dot(p.coupling().residual(x, y));
}

double augmented_lagrangian(const TwoBlockProblem& p, const Vector& x,
                            const Vector& y, const Vector& lambda,
                            double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("augmented_lagrangian: gamma must be positive");
  }
  p.check_dims(x, y, lambda);
  const Vector r = p.coupling().residual(x, y);
  return p.prox().evaluate(x) + p.smooth().evaluate(y) - lambda.dot(r) +
         0.5 * gamma * r.squaredNorm();
}

Vector lagrangian_grad_y(const TwoBlockProblem& p, const Vector& /*x*/,
                         const Vector& y, const Vector& lambda) {
  return p.smooth().gradient(y) - p.coupling().B.apply_transpose(lambda);
}

Vector augmented_lagrangian_grad_y(const TwoBlockProblem& p, const Vector& x,
                                   const Vector& y, const Vector& lambda,
                                   double gamma) {
  const auto& c = p.coupling();
  // grad g(y) + B^T (gamma r - lambda), one transpose application
  return p.smooth().gradient(y) +
         c.B.apply_transpose(gamma * c.residual(x, y) - lambda);
}

Vector kkt_map(const TwoBlockProblem& p, const Vector& x, const Vector& y,
               const Vector& lambda) {
  p.check_dims(x, y, lambda);
  Vector out(p.y_dim() + p.constraint_dim());
  out.head(p.y_dim()) = lagrangian_grad_y(p, x, y, lambda);
  out.tail(p.constraint_dim()) = p.coupling().residual(x, y);
  return out;
}

double khat_constant(const TwoBlockProblem& p, SpectralOptions opts) {
  const double lb = spectral_norm_sq(p.coupling().B, opts);
  const double lg = p.smooth().lipschitz_constant;
  return std::sqrt(std::max(2.0 * lg * lg + lb, 2.0 * lb));
}

}  // namespace egadm
