#include "egadm/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "egadm/operators.hpp"

namespace egadm {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::GL: return "GL";
    case Variant::GAL: return "GAL";
    case Variant::EGL: return "EGL";
    case Variant::EGAL: return "EGAL";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view s) noexcept {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "gl") return Variant::GL;
  if (lower == "gal") return Variant::GAL;
  if (lower == "egl") return Variant::EGL;
  if (lower == "egal") return Variant::EGAL;
  return std::nullopt;
}

IterateState IterateState::initial(const TwoBlockProblem& p) {
  return from(p, Vector::Zero(p.x_dim()),
              p.smooth().project(Vector::Zero(p.y_dim())),
              Vector::Zero(p.constraint_dim()));
}

IterateState IterateState::from(const TwoBlockProblem& p, Vector x, Vector y,
                                Vector lambda) {
  p.check_dims(x, y, lambda);
  IterateState s;
  s.x = std::move(x);
  s.y = std::move(y);
  s.lambda = std::move(lambda);
  s.y_bar = s.y;
  s.lambda_bar = s.lambda;
  s.sum_x = Vector::Zero(p.x_dim());
  s.sum_y_bar = Vector::Zero(p.y_dim());
  s.sum_lambda_bar = Vector::Zero(p.constraint_dim());
  return s;
}

double resolve_step_size(const TwoBlockProblem& p, const SolverConfig& cfg) {
  if (cfg.gamma) {
    if (!(*cfg.gamma > 0.0)) {
      throw std::invalid_argument("step size gamma must be positive");
    }
    return *cfg.gamma;
  }
  if (!(cfg.safety > 0.0 && cfg.safety <= 1.0)) {
    throw std::invalid_argument("safety factor must lie in (0, 1]");
  }
  return cfg.safety / (2.0 * khat_constant(p, cfg.spectral));
}

StepParams resolve_step_params(const TwoBlockProblem& p,
                               const SolverConfig& cfg) {
  return {cfg.variant, resolve_step_size(p, cfg), cfg.metric};
}

namespace {

// y-gradient of the (augmented) Lagrangian given the residual r = Ax + By - b
// already evaluated at the same point.
Vector y_gradient(const TwoBlockProblem& p, bool augmented, const Vector& y,
                  const Vector& lambda, const Vector& r, double gamma) {
  const auto& B = p.coupling().B;
  if (augmented) return p.smooth().gradient(y) + B.apply_transpose(gamma * r - lambda);
  return p.smooth().gradient(y) - B.apply_transpose(lambda);
}

}  // namespace

IterateState step(const TwoBlockProblem& p, const StepParams& params,
                  const IterateState& s) {
  const double gamma = params.gamma;
  const bool aug = is_augmented(params.variant);
  const auto& c = p.coupling();
  const auto& project = p.smooth().project;

  IterateState next;
  next.k = s.k + 1;
  next.x = p.prox().prox_with_metric(
      XSubproblem{c, s.x, s.y, s.lambda, gamma, params.metric});

  const Vector r_k = c.residual(next.x, s.y);
  if (is_extragradient(params.variant)) {
    next.y_bar = project(s.y - gamma * y_gradient(p, aug, s.y, s.lambda, r_k, gamma));
    next.lambda_bar = s.lambda - gamma * r_k;
    const Vector r_bar = c.residual(next.x, next.y_bar);
    next.y = project(
        s.y - gamma * y_gradient(p, aug, next.y_bar, next.lambda_bar, r_bar, gamma));
    next.lambda = s.lambda - gamma * r_bar;
  } else {
    next.y = project(s.y - gamma * y_gradient(p, aug, s.y, s.lambda, r_k, gamma));
    next.lambda = s.lambda - gamma * c.residual(next.x, next.y);
    next.y_bar = next.y;
    next.lambda_bar = next.lambda;
  }

  if (!all_finite(next.x) || !all_finite(next.y) || !all_finite(next.lambda)) {
    throw DivergenceError(std::string(to_string(params.variant)), next.k);
  }

  next.sum_x = s.sum_x + next.x;
  next.sum_y_bar = s.sum_y_bar + next.y_bar;
  next.sum_lambda_bar = s.sum_lambda_bar + next.lambda_bar;
  return next;
}

double lemma_monitor(const TwoBlockProblem& p, double gamma,
                     const Vector& x_next, const Vector& y_k,
                     const Vector& lambda_k, const Vector& y_bar,
                     const Vector& lambda_bar, const Vector& y_next,
                     const Vector& lambda_next) {
  const Vector f_y = lagrangian_grad_y(p, x_next, y_bar, lambda_bar);
  const Vector f_l = p.coupling().residual(x_next, y_bar);
  const double inner = f_y.dot(y_bar - y_next) + f_l.dot(lambda_bar - lambda_next);
  const double move =
      (y_k - y_next).squaredNorm() + (lambda_k - lambda_next).squaredNorm();
  return gamma * inner - 0.5 * move;
}

ErgodicAverages ergodic_averages(const IterateState& s) {
  if (s.k <= 0) {
    throw std::logic_error("ergodic_averages: no iterations accumulated");
  }
  const double n = static_cast<double>(s.k);
  return {s.sum_x / n, s.sum_y_bar / n, s.sum_lambda_bar / n};
}

double gap_surrogate(const TwoBlockProblem& p, const ErgodicAverages& avg,
                     const Vector& x_ref, const Vector& y_ref,
                     const Vector& lambda_ref) {
  return lagrangian(p, avg.x, avg.y, lambda_ref) -
         lagrangian(p, x_ref, y_ref, avg.lambda);
}

namespace {

double norm_of(const Vector& v, ResidualNorm kind) {
  if (v.size() == 0) return 0.0;
  return kind == ResidualNorm::Max ? v.cwiseAbs().maxCoeff() : v.norm();
}

}  // namespace

SolveReport solve(const TwoBlockProblem& p, const SolverConfig& cfg,
                  const IterateState& init) {
  p.check_dims(init.x, init.y, init.lambda);
  if (cfg.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  const StepParams params = resolve_step_params(p, cfg);
  validate_metric(params.metric, p.coupling().A, params.gamma);

  const bool monitor = cfg.monitor_lemma && params.variant == Variant::EGL;
  const auto start = std::chrono::steady_clock::now();

  SolveReport report;
  report.gamma = params.gamma;
  IterateState state = init;
  if (state.sum_x.size() != p.x_dim()) {
    state = IterateState::from(p, init.x, init.y, init.lambda);
  }

  for (long it = 0; it < cfg.max_iters; ++it) {
    IterateState next = step(p, params, state);

    if (monitor) {
      const double v =
          lemma_monitor(p, params.gamma, next.x, state.y, state.lambda,
                        next.y_bar, next.lambda_bar, next.y, next.lambda);
      if (v > kLemmaSlack) ++report.lemma_violations;
      report.max_lemma_value =
          it == 0 ? v : std::max(report.max_lemma_value, v);
      if (cfg.record_history) report.lemma_history.push_back(v);
    }

    const double res =
        norm_of(p.coupling().residual(next.x, next.y_bar), cfg.stop.norm);
    if (!std::isfinite(res) || res > kDivergenceThreshold) {
      throw DivergenceError(std::string(to_string(params.variant)), next.k);
    }
    bool stop = res < cfg.stop.tol;
    if (stop && cfg.stop.require_movement) {
      Vector dz(p.y_dim() + p.constraint_dim());
      dz << next.y - state.y, next.lambda - state.lambda;
      stop = norm_of(dz, cfg.stop.norm) < cfg.stop.tol;
    }
    if (cfg.record_history) report.residual_history.push_back(res);

    state = std::move(next);
    ++report.iterations;
    if (stop) {
      report.converged = true;
      break;
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (state.k > 0) report.ergodic = ergodic_averages(state);
  report.final_state = std::move(state);
  return report;
}

SolveReport solve(const TwoBlockProblem& p, const SolverConfig& cfg) {
  return solve(p, cfg, IterateState::initial(p));
}

}  // namespace egadm
