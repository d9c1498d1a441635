#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "egadm/problem.hpp"
#include "egadm/solver.hpp"

namespace egadm::fused {

/// Which planted coefficient pattern generated an instance.
enum class Pattern {
  /// four blocks of 100 with random heights in (0, 20); needs n >= 1000
  Simple,
  /// heights 20, 30, 10, 20 on indices 1-20, 41, 71-85, 121-125; needs n >= 126
  Blocks,
};

std::string_view to_string(Pattern p) noexcept;
std::optional<Pattern> parse_pattern(std::string_view s) noexcept;

struct FusedLogisticInstance {
  Matrix A;       ///< m samples x n features
  Vector labels;  ///< entries in {-1, +1}
  Vector x_hat;
  double intercept = 0.0;
  std::uint64_t seed = 0;
  Pattern pattern = Pattern::Blocks;

  Index n() const noexcept { return A.cols(); }
  Index m() const noexcept { return A.rows(); }
};

/// The (n-1) x n forward difference operator (L x)_j = x_j - x_{j+1}.
class DifferenceMatrix {
 public:
  explicit DifferenceMatrix(Index n);

  Index n() const noexcept { return n_; }
  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& u) const;
  Matrix to_dense() const;

 private:
  Index n_;
};

struct LogisticGradient {
  Vector y;
  double c = 0.0;
};

/// Average logistic loss l(y, c) = 1/m sum log(1 + exp(-b_i (a_i^T y + c)))
/// evaluated through the cached label-scaled matrix A_hat = diag(b) A.
class LogisticAux {
 public:
  LogisticAux(const Matrix& a, const Vector& labels);

  const Matrix& a_hat() const noexcept { return a_hat_; }
  const Vector& labels() const noexcept { return labels_; }
  Index m() const noexcept { return a_hat_.rows(); }
  Index n() const noexcept { return a_hat_.cols(); }

  double value(const Vector& y, double c) const;
  LogisticGradient gradient(const Vector& y, double c) const;
  /// |[A_hat, b]|^2 / (4 m): the sigmoid slope is at most 1/4 and the
  /// gradient is taken jointly in (y, c).
  double lipschitz(SpectralOptions opts = {}) const;

 private:
  Matrix a_hat_;
  Vector labels_;
};

struct FusedLogisticConfig {
  double alpha = 5e-4;  ///< l1 weight
  double beta = 5e-2;   ///< fusion weight
  std::optional<double> gamma;
  double safety = 0.9;
};

/// Max-norm residual below 1e-4; no movement test.
StopRule default_stop_rule();

/// Power-iteration budget for the chain difference operator, whose top
/// eigenvalues cluster near 5 and converge slowly.
SpectralOptions default_spectral_options();

/// Splitting x = y, w = L y over variables
///   prox block (x, w) in R^{2n-1}: alpha |x|_1 + beta |w|_1, H = 0
///   smooth block (y, c) in R^{n+1}: l(y, c), Y = whole space
///   coupling [x; w] - [I; L] y = 0, c does not enter the constraint.
TwoBlockProblem as_problem(const FusedLogisticInstance& inst,
                           const FusedLogisticConfig& cfg);

/// Solver settings for EGAL on the fused problem.
SolverConfig algorithm1_config(const FusedLogisticConfig& cfg,
                               StopRule stop = default_stop_rule(),
                               long max_iters = 20000);

SolveReport solve_algorithm1(const FusedLogisticInstance& inst,
                             const FusedLogisticConfig& cfg,
                             StopRule stop = default_stop_rule(),
                             long max_iters = 20000);

/// Coefficient vector x (first n entries of the prox block).
Vector coefficients(const SolveReport& r, Index n);
/// Intercept c (last entry of the smooth block).
double intercept(const SolveReport& r);

/// Four constant blocks of width 100 with random heights; labels sign(A x_hat + c e) with c uniform in (0, 1).
FusedLogisticInstance generate_fused_simple(Index n, Index m,
                                            std::uint64_t seed);
/// Fixed blocks at 1-20, 41, 71-85, 121-125; same label model.
FusedLogisticInstance generate_fused_blocks(Index n, Index m,
                                            std::uint64_t seed);
FusedLogisticInstance generate(Pattern p, Index n, Index m,
                               std::uint64_t seed);

struct SparsityReport {
  Index l0 = 0;  ///< entries of |x| above threshold
  Index tv0 = 0; ///< entries of |L x| above threshold
};

SparsityReport sparsity_report(const Vector& x, double threshold);
/// Uses threshold 1e-6 * |x|_inf; a zero vector reports (0, 0).
SparsityReport sparsity_report(const Vector& x);

}  // namespace egadm::fused
