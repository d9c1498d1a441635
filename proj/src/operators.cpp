#include "egadm/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace egadm {

namespace {

inline double soft(double z, double t) {
  const double mag = std::abs(z) - t;
  if (mag > 0.0) return z > 0.0 ? mag : -mag;
  return 0.0;
}

}  // namespace

Vector shrink(const Vector& z, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("shrink: negative threshold");
  Vector out(z.size());
  for (Index i = 0; i < z.size(); ++i) out[i] = soft(z[i], tau);
  return out;
}

Vector shrink(const Vector& z, const Vector& tau) {
  if (tau.size() != z.size()) {
    throw DimensionError("shrink: threshold vector length mismatch");
  }
  if (!(tau.minCoeff() >= 0.0)) {
    throw std::invalid_argument("shrink: negative threshold");
  }
  Vector out(z.size());
  for (Index i = 0; i < z.size(); ++i) out[i] = soft(z[i], tau[i]);
  return out;
}

AffineProjector::AffineProjector(Matrix a, Vector b)
    : a_(std::move(a)),
      b_(std::move(b)),
      gram_(spd_factorize(a_ * a_.transpose())) {
  if (b_.size() != a_.rows()) {
    throw DimensionError("AffineProjector: b length does not match rows of A");
  }
}

Vector AffineProjector::project(const Vector& w) const {
  if (w.size() != a_.cols()) {
    throw DimensionError("AffineProjector::project: expected length " +
                         std::to_string(a_.cols()));
  }
  const Vector rhs = b_ - a_ * w;
  return w + a_.transpose() * spd_solve(gram_, rhs);
}

bool AffineProjector::contains(const Vector& y, double tol) const {
  return (a_ * y - b_).norm() <= tol * (1.0 + b_.norm());
}

Vector solve_x_subproblem_l1(const Vector& weights, const XSubproblem& sub) {
  const auto& c = sub.coupling;
  if (weights.size() != c.A.cols()) {
    throw DimensionError("solve_x_subproblem_l1: weight vector length mismatch");
  }
  if (!(sub.gamma > 0.0)) {
    throw std::invalid_argument("solve_x_subproblem_l1: gamma must be positive");
  }
  switch (sub.metric.kind) {
    case MetricH::Kind::Zero: {
      if (!c.A.is_identity()) {
        throw std::invalid_argument(
            "solve_x_subproblem_l1: H = 0 needs A = I for a closed form");
      }
      Vector anchor = c.b - c.B.apply(sub.y);
      anchor += sub.lambda / sub.gamma;
      return shrink(anchor, weights / sub.gamma);
    }
    case MetricH::Kind::ScaledIdentityMinusGram: {
      const double tau = sub.metric.tau;
      if (!(tau > 0.0)) {
        throw std::invalid_argument("solve_x_subproblem_l1: tau must be positive");
      }
      const Vector r = c.residual(sub.x_prev, sub.y);
      const Vector g = c.A.apply_transpose(sub.gamma * r - sub.lambda);
      return shrink(sub.x_prev - g / tau, weights / tau);
    }
  }
  throw std::invalid_argument("solve_x_subproblem_l1: unsupported metric");
}

Vector solve_x_subproblem_l1(double weight, const XSubproblem& sub) {
  return solve_x_subproblem_l1(Vector::Constant(sub.coupling.A.cols(), weight),
                               sub);
}

void validate_metric(const MetricH& h, const LinearOperator& a, double gamma) {
  if (h.kind == MetricH::Kind::Zero) return;
  const double lmax = spectral_norm_sq(a);
  if (!(h.tau > gamma * lmax)) {
    throw std::invalid_argument(
        "metric H = tau I - gamma A^T A is not positive definite: tau = " +
        std::to_string(h.tau) + ", gamma * lambda_max(A^T A) = " +
        std::to_string(gamma * lmax));
  }
}

}  // namespace egadm
