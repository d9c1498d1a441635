#include "egadm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace egadm {

LinearOperator LinearOperator::dense(Matrix m) {
  const Index r = m.rows();
  const Index c = m.cols();
  return LinearOperator(r, c, Dense{std::move(m)});
}

LinearOperator LinearOperator::identity(Index n, double scale) {
  return LinearOperator(n, n, ScaledIdentity{scale});
}

LinearOperator LinearOperator::matrix_free(Index rows, Index cols, Apply apply,
                                           Apply apply_transpose) {
  return LinearOperator(
      rows, cols, MatrixFree{std::move(apply), std::move(apply_transpose)});
}

Vector LinearOperator::apply(const Vector& v) const {
  if (v.size() != cols_) {
    throw DimensionError("LinearOperator::apply: expected length " +
                         std::to_string(cols_) + ", got " +
                         std::to_string(v.size()));
  }
  if (const auto* d = std::get_if<Dense>(&impl_)) return d->m * v;
  if (const auto* s = std::get_if<ScaledIdentity>(&impl_)) {
    if (s->scale == 1.0) return v;
    return s->scale * v;
  }
  return std::get<MatrixFree>(impl_).apply(v);
}

Vector LinearOperator::apply_transpose(const Vector& v) const {
  if (v.size() != rows_) {
    throw DimensionError("LinearOperator::apply_transpose: expected length " +
                         std::to_string(rows_) + ", got " +
                         std::to_string(v.size()));
  }
  if (const auto* d = std::get_if<Dense>(&impl_))
    return d->m.transpose() * v;
  if (const auto* s = std::get_if<ScaledIdentity>(&impl_)) {
    if (s->scale == 1.0) return v;
    return s->scale * v;
  }
  return std::get<MatrixFree>(impl_).apply_transpose(v);
}

bool LinearOperator::is_identity() const noexcept {
  const auto s = identity_scale();
  return s && *s == 1.0;
}

std::optional<double> LinearOperator::identity_scale() const noexcept {
  if (const auto* s = std::get_if<ScaledIdentity>(&impl_)) return s->scale;
  return std::nullopt;
}

const Matrix* LinearOperator::dense_matrix() const noexcept {
  if (const auto* d = std::get_if<Dense>(&impl_)) return &d->m;
  return nullptr;
}

Matrix LinearOperator::to_dense() const {
  if (const auto* d = std::get_if<Dense>(&impl_)) return d->m;
  Matrix out(rows_, cols_);
  Vector e = Vector::Zero(cols_);
  for (Index j = 0; j < cols_; ++j) {
    e[j] = 1.0;
    out.col(j) = apply(e);
    e[j] = 0.0;
  }
  return out;
}

namespace {

struct PowerRun {
  double estimate = 0.0;
  bool converged = false;
};

PowerRun power_iterate(const LinearOperator& m, Vector v,
                       const SpectralOptions& opts) {
  PowerRun run;
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    const Vector mv = m.apply(v);
    const double est = mv.squaredNorm();
    run.estimate = std::max(run.estimate, est);
    Vector next = m.apply_transpose(mv);
    const double nn = next.norm();
    if (nn == 0.0) {
      // v lies in the null space of M; nothing more to learn from this start
      run.estimate = std::max(run.estimate, 0.0);
      run.converged = true;
      return run;
    }
    if (it > 0 && std::abs(est - prev) <= opts.tol * est) {
      run.converged = true;
      return run;
    }
    prev = est;
    v = next / nn;
  }
  return run;
}

}  // namespace

double spectral_norm_sq(const LinearOperator& m, SpectralOptions opts) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw DimensionError("spectral_norm_sq: empty operator");
  }
  if (!(opts.tol > 0.0)) {
    throw std::invalid_argument("spectral_norm_sq: tol must be positive");
  }
  if (const auto s = m.identity_scale()) return (*s) * (*s);

  const Index n = m.cols();
  const PowerRun from_ones = power_iterate(m, Vector::Ones(n), opts);

  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector start(n);
  for (Index i = 0; i < n; ++i) start[i] = normal(rng);
  const PowerRun from_random = power_iterate(m, start, opts);

  const double best = std::max(from_ones.estimate, from_random.estimate);
  if (!from_ones.converged || !from_random.converged) {
    throw ConvergenceError("spectral_norm_sq: power iteration did not converge "
                           "within " + std::to_string(opts.max_iters) +
                               " iterations",
                           best);
  }
  return best;
}

double spectral_norm_sq(const Matrix& m, SpectralOptions opts) {
  if (m.size() == 0) throw DimensionError("spectral_norm_sq: empty matrix");
  // Iterate on the smaller Gram matrix; the top eigenvalue is shared.
  if (m.rows() < m.cols()) {
    return spectral_norm_sq(LinearOperator::dense(m.transpose()), opts);
  }
  return spectral_norm_sq(LinearOperator::dense(m), opts);
}

SpdFactorization spd_factorize(const Matrix& m) {
  const Index n = m.rows();
  if (n != m.cols()) throw DimensionError("spd_factorize: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
    throw DimensionError("spd_factorize: matrix not symmetric");
  }
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return SpdFactorization(std::move(l));
}

Vector spd_solve(const SpdFactorization& f, const Vector& rhs) {
  if (rhs.size() != f.dimension()) {
    throw DimensionError("spd_solve: rhs length " + std::to_string(rhs.size()) +
                         " does not match dimension " +
                         std::to_string(f.dimension()));
  }
  const auto& l = f.lower();
  Vector v = l.triangularView<Eigen::Lower>().solve(rhs);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(v);
  return v;
}

bool all_finite(const Vector& v) noexcept { return v.allFinite(); }
bool all_finite(const Matrix& m) noexcept { return m.allFinite(); }

}  // namespace egadm
