#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "egadm/problem.hpp"

namespace egadm {

/// GL / GAL: one projected gradient step on y using the plain / augmented
/// Lagrangian. EGL / EGAL: extragradient (midpoint then corrected) steps.
enum class Variant { GL, GAL, EGL, EGAL };

std::string_view to_string(Variant v) noexcept;
/// Case-insensitive "gl", "gal", "egl", "egal".
std::optional<Variant> parse_variant(std::string_view s) noexcept;

inline bool is_extragradient(Variant v) noexcept {
  return v == Variant::EGL || v == Variant::EGAL;
}
inline bool is_augmented(Variant v) noexcept {
  return v == Variant::GAL || v == Variant::EGAL;
}

enum class ResidualNorm { Two, Max };

/// Stop when |A x + B ybar - b| < tol and, if require_movement is set,
/// |z_{k+1} - z_k| < tol with z = (y, lambda). For GL/GAL ybar is y_{k+1}.
struct StopRule {
  double tol = 1e-4;
  ResidualNorm norm = ResidualNorm::Two;
  bool require_movement = true;
};

struct SolverConfig {
  Variant variant = Variant::EGL;
  /// Explicit step size; when empty, gamma = safety / (2 L_hat).
  std::optional<double> gamma;
  double safety = 0.9;
  MetricH metric = MetricH::zero();
  long max_iters = 20000;
  StopRule stop;
  /// Evaluate the extragradient descent inequality each iteration (EGL only).
  bool monitor_lemma = false;
  bool record_history = false;
  SpectralOptions spectral;
};

/// Resolved per-iteration parameters.
struct StepParams {
  Variant variant = Variant::EGL;
  double gamma = 0.0;
  MetricH metric = MetricH::zero();
};

struct IterateState {
  Vector x;
  Vector y;
  Vector lambda;
  Vector y_bar;       ///< midpoint; equals y for GL/GAL
  Vector lambda_bar;  ///< midpoint; equals lambda for GL/GAL
  long k = 0;
  Vector sum_x;
  Vector sum_y_bar;
  Vector sum_lambda_bar;

  /// x = 0, y = proj_Y(0), lambda = 0, empty sums.
  static IterateState initial(const TwoBlockProblem& p);
  /// Starts from the given point with empty sums; y is used as given.
  static IterateState from(const TwoBlockProblem& p, Vector x, Vector y,
                           Vector lambda);
};

struct ErgodicAverages {
  Vector x;
  Vector y;
  Vector lambda;
};

struct SolveReport {
  long iterations = 0;
  bool converged = false;
  double gamma = 0.0;
  /// Primal residual per iteration (when record_history).
  std::vector<double> residual_history;
  /// Descent-inequality values per iteration (when monitoring and recording).
  std::vector<double> lemma_history;
  long lemma_violations = 0;
  double max_lemma_value = 0.0;
  double wall_seconds = 0.0;
  IterateState final_state;
  /// Diagnostic only for GL/GAL: they have no midpoints, so y, lambda are
  /// averaged in their place.
  ErgodicAverages ergodic;
};

/// Values above this count as descent-inequality violations.
inline constexpr double kLemmaSlack = 1e-10;
/// Residuals beyond this are treated as divergence.
inline constexpr double kDivergenceThreshold = 1e12;

/// gamma from cfg: explicit value, or safety / (2 khat_constant(p)).
double resolve_step_size(const TwoBlockProblem& p, const SolverConfig& cfg);
StepParams resolve_step_params(const TwoBlockProblem& p,
                               const SolverConfig& cfg);

/// One full iteration of the selected variant. Throws DivergenceError when
/// the new iterate is non-finite.
IterateState step(const TwoBlockProblem& p, const StepParams& params,
                  const IterateState& s);

/// Iterates until the stop rule fires (checked before the cap) or max_iters.
SolveReport solve(const TwoBlockProblem& p, const SolverConfig& cfg,
                  const IterateState& init);
SolveReport solve(const TwoBlockProblem& p, const SolverConfig& cfg);

/// gamma <F(x+, zbar), zbar - z+> - 1/2 |z_k - z+|^2 with F the Lagrangian
/// saddle operator. Non-positive whenever gamma <= 1 / (2 L_hat).
double lemma_monitor(const TwoBlockProblem& p, double gamma,
                     const Vector& x_next, const Vector& y_k,
                     const Vector& lambda_k, const Vector& y_bar,
                     const Vector& lambda_bar, const Vector& y_next,
                     const Vector& lambda_next);

/// Running sums divided by k. Throws std::logic_error when k = 0.
ErgodicAverages ergodic_averages(const IterateState& s);

/// L(x~, y~; lambda*) - L(x*, y*; lambda~) against a single reference
/// primal-dual point.
double gap_surrogate(const TwoBlockProblem& p, const ErgodicAverages& avg,
                     const Vector& x_ref, const Vector& y_ref,
                     const Vector& lambda_ref);

}  // namespace egadm
