#include "egadm/basis_pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "egadm/operators.hpp"

namespace egadm::bp {

BasisPursuitInstance generate_bp(Index n, Index m, Index s,
                                 std::uint64_t seed) {
  if (!(s >= 1 && s <= m && m <= n)) {
    throw std::invalid_argument("generate_bp: need 1 <= s <= m <= n");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  BasisPursuitInstance inst;
  inst.s = s;
  inst.seed = seed;
  constexpr int kAttempts = 3;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Matrix a(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) a(i, j) = normal(rng);
    a /= std::sqrt(spectral_norm_sq(a));
    try {
      (void)spd_factorize(a * a.transpose());
    } catch (const NotPositiveDefinite&) {
      continue;
    }
    inst.A = std::move(a);
    break;
  }
  if (inst.A.size() == 0) {
    throw std::runtime_error("generate_bp: could not draw a full-row-rank A");
  }

  // partial Fisher-Yates: first s entries are a uniform s-subset
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(pick(rng))]);
  }
  inst.x_hat = Vector::Zero(n);
  for (Index i = 0; i < s; ++i) {
    double v = 0.0;
    while (v == 0.0) v = unit(rng);  // open interval
    inst.x_hat[idx[static_cast<std::size_t>(i)]] = v;
  }
  inst.b = inst.A * inst.x_hat;
  return inst;
}

TwoBlockProblem as_problem(const BasisPursuitInstance& inst) {
  const Index n = inst.n();
  auto projector = std::make_shared<const AffineProjector>(inst.A, inst.b);

  ProxBlock prox;
  prox.dimension = n;
  prox.evaluate = [](const Vector& x) { return x.lpNorm<1>(); };
  prox.prox_with_metric = [](const XSubproblem& sub) {
    return solve_x_subproblem_l1(1.0, sub);
  };
  prox.contains = [](const Vector&) { return true; };

  SmoothBlock smooth;
  smooth.dimension = n;
  smooth.evaluate = [](const Vector&) { return 0.0; };
  smooth.gradient = [n](const Vector&) { return Vector::Zero(n); };
  smooth.lipschitz_constant = 0.0;
  smooth.project = [projector](const Vector& y) { return projector->project(y); };
  smooth.contains = [projector](const Vector& y) { return projector->contains(y); };

  Coupling coupling{LinearOperator::identity(n), LinearOperator::identity(n, -1.0),
                    Vector::Zero(n)};
  return TwoBlockProblem(std::move(prox), std::move(smooth), std::move(coupling));
}

double recovery_error(const BasisPursuitInstance& inst, const Vector& x) {
  if (x.size() != inst.n()) throw DimensionError("recovery_error: length mismatch");
  return (x - inst.x_hat).norm();
}

}  // namespace egadm::bp
