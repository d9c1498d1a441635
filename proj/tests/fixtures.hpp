#pragma once

#include <memory>
#include <random>

#include "egadm/operators.hpp"
#include "egadm/problem.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace egadm;

// f = |x|_1, g(y) = 1/2 y^T Q y + q^T y over Y = R^p, dense A and B.
struct Quadratic {
  Matrix A, B, Q;
  Vector b, q;
  double lg = 0.0;
};

inline Quadratic random_quadratic(Index m, Index n, Index p,
                                  std::mt19937_64& rng) {
  Quadratic d;
  d.A = oracle::gaussian_matrix(m, n, rng);
  d.B = oracle::gaussian_matrix(m, p, rng);
  d.b = oracle::gaussian_vector(m, rng);
  const Matrix g = oracle::gaussian_matrix(p, p, rng);
  d.Q = g.transpose() * g / static_cast<double>(p);
  d.q = oracle::gaussian_vector(p, rng);
  d.lg = oracle::jacobi_lambda_max(d.Q);
  return d;
}

inline TwoBlockProblem as_problem(const Quadratic& d) {
  ProxBlock prox;
  prox.dimension = d.A.cols();
  prox.evaluate = [](const Vector& x) { return x.lpNorm<1>(); };
  prox.prox_with_metric = [](const XSubproblem& s) {
    return solve_x_subproblem_l1(1.0, s);
  };
  prox.contains = [](const Vector&) { return true; };

  SmoothBlock smooth;
  smooth.dimension = d.B.cols();
  smooth.evaluate = [q = d.Q, l = d.q](const Vector& y) {
    return 0.5 * y.dot(q * y) + l.dot(y);
  };
  smooth.gradient = [q = d.Q, l = d.q](const Vector& y) {
    return Vector(q * y + l);
  };
  smooth.lipschitz_constant = d.lg;
  smooth.project = [](const Vector& y) { return y; };
  smooth.contains = [](const Vector&) { return true; };

  return TwoBlockProblem(std::move(prox), std::move(smooth),
                         Coupling{LinearOperator::dense(d.A),
                                  LinearOperator::dense(d.B), d.b});
}

}  // namespace fixture
