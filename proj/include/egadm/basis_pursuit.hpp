#pragma once

#include <cstdint>

#include "egadm/problem.hpp"

namespace egadm::bp {

/// min |x|_1  s.t.  A x = b, with a planted s-sparse solution x_hat.
struct BasisPursuitInstance {
  Matrix A;  ///< m x n, spectrally normalized (|A| = 1)
  Vector b;  ///< A x_hat
  Vector x_hat;
  Index s = 0;
  std::uint64_t seed = 0;

  Index n() const noexcept { return A.cols(); }
  Index m() const noexcept { return A.rows(); }
};

/// Default step size for basis pursuit benchmarks.
inline constexpr double kDefaultGamma = 0.1;

/// Gaussian A normalized by its largest singular value, s support indices
/// drawn without replacement, values uniform in (0, 1), b = A x_hat.
/// Requires 1 <= s <= m <= n. Regenerates up to 3 times on rank deficiency.
BasisPursuitInstance generate_bp(Index n, Index m, Index s, std::uint64_t seed);

/// Splitting x - y = 0, y in {y : A y = b}:
///   f = |x|_1 (closed-form shrink, H = 0), g = 0 with L_g = 0,
///   coupling A_c = I, B = -I, b_c = 0.
TwoBlockProblem as_problem(const BasisPursuitInstance& inst);

/// |x - x_hat|
double recovery_error(const BasisPursuitInstance& inst, const Vector& x);

}  // namespace egadm::bp
