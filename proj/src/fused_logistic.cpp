#include "egadm/fused_logistic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "egadm/operators.hpp"

namespace egadm::fused {

std::string_view to_string(Pattern p) noexcept {
  return p == Pattern::Simple ? "simple" : "blocks";
}

std::optional<Pattern> parse_pattern(std::string_view s) noexcept {
  if (s == "simple") return Pattern::Simple;
  if (s == "blocks") return Pattern::Blocks;
  return std::nullopt;
}

DifferenceMatrix::DifferenceMatrix(Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("DifferenceMatrix: n must be >= 1");
}

Vector DifferenceMatrix::apply(const Vector& x) const {
  if (x.size() != n_) throw DimensionError("DifferenceMatrix::apply");
  return x.head(n_ - 1) - x.tail(n_ - 1);
}

Vector DifferenceMatrix::apply_transpose(const Vector& u) const {
  if (u.size() != n_ - 1) {
    throw DimensionError("DifferenceMatrix::apply_transpose");
  }
  Vector out = Vector::Zero(n_);
  out.head(n_ - 1) += u;
  out.tail(n_ - 1) -= u;
  return out;
}

Matrix DifferenceMatrix::to_dense() const {
  Matrix l = Matrix::Zero(n_ - 1, n_);
  for (Index j = 0; j + 1 < n_; ++j) {
    l(j, j) = 1.0;
    l(j, j + 1) = -1.0;
  }
  return l;
}

namespace {

// log(1 + exp(t)) without overflow
inline double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t))
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LogisticAux::LogisticAux(const Matrix& a, const Vector& labels)
    : a_hat_(labels.asDiagonal() * a), labels_(labels) {
  if (labels.size() != a.rows()) {
    throw DimensionError("LogisticAux: one label per sample row required");
  }
  if (a.rows() == 0) throw DimensionError("LogisticAux: no samples");
}

double LogisticAux::value(const Vector& y, double c) const {
  if (y.size() != n()) throw DimensionError("LogisticAux::value");
  const Vector t = a_hat_ * y + labels_ * c;
  double sum = 0.0;
  for (Index i = 0; i < t.size(); ++i) sum += softplus(-t[i]);
  return sum / static_cast<double>(m());
}

LogisticGradient LogisticAux::gradient(const Vector& y, double c) const {
  if (y.size() != n()) throw DimensionError("LogisticAux::gradient");
  const Vector t = a_hat_ * y + labels_ * c;
  // 1 - d with d = sigmoid(t)
  Vector one_minus_d(t.size());
  for (Index i = 0; i < t.size(); ++i) one_minus_d[i] = sigmoid(-t[i]);
  const double inv_m = 1.0 / static_cast<double>(m());
  return {-inv_m * (a_hat_.transpose() * one_minus_d),
          -inv_m * labels_.dot(one_minus_d)};
}

double LogisticAux::lipschitz(SpectralOptions opts) const {
  Matrix augmented(m(), n() + 1);
  augmented << a_hat_, labels_;
  return spectral_norm_sq(augmented, opts) / (4.0 * static_cast<double>(m()));
}

StopRule default_stop_rule() {
  return StopRule{1e-4, ResidualNorm::Max, false};
}

SpectralOptions default_spectral_options() { return {1e-10, 400000}; }

TwoBlockProblem as_problem(const FusedLogisticInstance& inst,
                           const FusedLogisticConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.beta >= 0.0)) {
    throw std::invalid_argument("fused logistic: alpha and beta must be >= 0");
  }
  const Index n = inst.n();
  if (n < 2) throw std::invalid_argument("fused logistic: need n >= 2");
  auto aux = std::make_shared<const LogisticAux>(inst.A, inst.labels);
  const DifferenceMatrix diff(n);
  const Index rows = 2 * n - 1;

  Vector weights(rows);
  weights.head(n).setConstant(cfg.alpha);
  weights.tail(n - 1).setConstant(cfg.beta);

  ProxBlock prox;
  prox.dimension = rows;
  prox.evaluate = [n, a = cfg.alpha, b = cfg.beta](const Vector& v) {
    return a * v.head(n).lpNorm<1>() + b * v.tail(n - 1).lpNorm<1>();
  };
  prox.prox_with_metric = [weights](const XSubproblem& sub) {
    return solve_x_subproblem_l1(weights, sub);
  };
  prox.contains = [](const Vector&) { return true; };

  SmoothBlock smooth;
  smooth.dimension = n + 1;
  smooth.evaluate = [aux, n](const Vector& v) {
    return aux->value(v.head(n), v[n]);
  };
  smooth.gradient = [aux, n](const Vector& v) {
    const LogisticGradient g = aux->gradient(v.head(n), v[n]);
    Vector out(n + 1);
    out << g.y, g.c;
    return out;
  };
  smooth.lipschitz_constant = aux->lipschitz();
  smooth.project = [](const Vector& v) { return v; };
  smooth.contains = [](const Vector&) { return true; };

  // B = -[I 0; L 0]
  auto apply = [diff, n](const Vector& v) {
    Vector out(2 * n - 1);
    out.head(n) = -v.head(n);
    out.tail(n - 1) = -diff.apply(v.head(n));
    return out;
  };
  auto apply_t = [diff, n](const Vector& u) {
    Vector out(n + 1);
    out.head(n) = -(u.head(n) + diff.apply_transpose(u.tail(n - 1)));
    out[n] = 0.0;
    return out;
  };
  Coupling coupling{LinearOperator::identity(rows),
                    LinearOperator::matrix_free(rows, n + 1, apply, apply_t),
                    Vector::Zero(rows)};
  return TwoBlockProblem(std::move(prox), std::move(smooth), std::move(coupling));
}

SolverConfig algorithm1_config(const FusedLogisticConfig& cfg, StopRule stop,
                               long max_iters) {
  SolverConfig sc;
  sc.variant = Variant::EGAL;
  sc.gamma = cfg.gamma;
  sc.safety = cfg.safety;
  sc.metric = MetricH::zero();
  sc.max_iters = max_iters;
  sc.stop = stop;
  sc.spectral = default_spectral_options();
  return sc;
}

SolveReport solve_algorithm1(const FusedLogisticInstance& inst,
                             const FusedLogisticConfig& cfg, StopRule stop,
                             long max_iters) {
  const TwoBlockProblem p = as_problem(inst, cfg);
  return solve(p, algorithm1_config(cfg, stop, max_iters));
}

Vector coefficients(const SolveReport& r, Index n) {
  return r.final_state.x.head(n);
}

double intercept(const SolveReport& r) {
  const auto& y = r.final_state.y;
  return y[y.size() - 1];
}

namespace {

FusedLogisticInstance draw_data(Vector x_hat, Index m, std::uint64_t seed,
                                std::mt19937_64& rng, Pattern pattern) {
  if (m < 1) throw std::invalid_argument("fused generator: need m >= 1");
  const Index n = x_hat.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FusedLogisticInstance inst;
  inst.A.resize(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) inst.A(i, j) = normal(rng);
  do {
    inst.intercept = unit(rng);
  } while (inst.intercept == 0.0);
  const Vector score = inst.A * x_hat + Vector::Constant(m, inst.intercept);
  inst.labels.resize(m);
  for (Index i = 0; i < m; ++i) inst.labels[i] = score[i] < 0.0 ? -1.0 : 1.0;
  inst.x_hat = std::move(x_hat);
  inst.seed = seed;
  inst.pattern = pattern;
  return inst;
}

}  // namespace

FusedLogisticInstance generate_fused_simple(Index n, Index m,
                                            std::uint64_t seed) {
  if (n < 1000) {
    throw std::invalid_argument("generate_fused_simple: pattern needs n >= 1000");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> height(0.0, 20.0);
  Vector x_hat = Vector::Zero(n);
  // 1-based blocks 1-100, 201-300, 401-500, 601-700
  for (Index start : {0, 200, 400, 600}) {
    double r = 0.0;
    while (r == 0.0) r = height(rng);
    x_hat.segment(start, 100).setConstant(r);
  }
  return draw_data(std::move(x_hat), m, seed, rng, Pattern::Simple);
}

FusedLogisticInstance generate_fused_blocks(Index n, Index m,
                                            std::uint64_t seed) {
  if (n < 126) {
    throw std::invalid_argument("generate_fused_blocks: pattern needs n >= 126");
  }
  std::mt19937_64 rng(seed);
  Vector x_hat = Vector::Zero(n);
  x_hat.segment(0, 20).setConstant(20.0);   // 1-20
  x_hat[40] = 30.0;                         // 41
  x_hat.segment(70, 15).setConstant(10.0);  // 71-85
  x_hat.segment(120, 5).setConstant(20.0);  // 121-125
  return draw_data(std::move(x_hat), m, seed, rng, Pattern::Blocks);
}

FusedLogisticInstance generate(Pattern p, Index n, Index m,
                               std::uint64_t seed) {
  return p == Pattern::Simple ? generate_fused_simple(n, m, seed)
                              : generate_fused_blocks(n, m, seed);
}

SparsityReport sparsity_report(const Vector& x, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("sparsity_report: threshold must be positive");
  }
  SparsityReport r;
  r.l0 = (x.array().abs() > threshold).count();
  if (x.size() > 1) {
    const Vector lx = DifferenceMatrix(x.size()).apply(x);
    r.tv0 = (lx.array().abs() > threshold).count();
  }
  return r;
}

SparsityReport sparsity_report(const Vector& x) {
  if (x.size() == 0) return {};
  const double inf = x.cwiseAbs().maxCoeff();
  if (inf == 0.0) return {};
  return sparsity_report(x, 1e-6 * inf);
}

}  // namespace egadm::fused
