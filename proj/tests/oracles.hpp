#pragma once

// Independent reference computations for the tests. Deliberately naive: plain
// loops over Eigen storage, no calls into the library under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Cyclic Jacobi rotations on a symmetric matrix; returns all eigenvalues
// (unsorted) once the off-diagonal mass is below tol.
inline std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-14,
                                              int max_sweeps = 200) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (Index i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (Index j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    }
    if (off <= tol * tol * (diag + off)) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  return ev;
}

inline double jacobi_lambda_max(const Matrix& sym) {
  double best = -INFINITY;
  for (double v : jacobi_eigenvalues(sym)) best = std::max(best, v);
  return best;
}

// argmin over a uniform grid on [lo, hi]
inline double grid_argmin(const std::function<double(double)>& phi, double lo,
                          double hi, double step) {
  const long n = static_cast<long>(std::llround((hi - lo) / step));
  double best_x = lo, best_v = phi(lo);
  for (long i = 1; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = phi(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

// argmin tau |x| + 1/2 (x - z)^2 on [-5, 5], step 1e-4
inline double grid_prox_abs(double z, double tau) {
  return grid_argmin(
      [&](double x) { return tau * std::abs(x) + 0.5 * (x - z) * (x - z); },
      -5.0, 5.0, 1e-4);
}

// Coarse-to-fine 2-D grid search: full grid at `step`, then a refined grid
// around the incumbent until `fine`.
inline std::pair<double, double> grid_argmin_2d(
    const std::function<double(double, double)>& phi, double lo, double hi,
    double step, double fine) {
  double bx = lo, by = lo, bv = phi(lo, lo);
  double xlo = lo, xhi = hi, ylo = lo, yhi = hi;
  while (true) {
    const long nx = static_cast<long>(std::llround((xhi - xlo) / step));
    const long ny = static_cast<long>(std::llround((yhi - ylo) / step));
    for (long i = 0; i <= nx; ++i) {
      for (long j = 0; j <= ny; ++j) {
        const double x = xlo + static_cast<double>(i) * step;
        const double y = ylo + static_cast<double>(j) * step;
        const double v = phi(x, y);
        if (v < bv) {
          bv = v;
          bx = x;
          by = y;
        }
      }
    }
    if (step <= fine) break;
    xlo = bx - 2 * step;
    xhi = bx + 2 * step;
    ylo = by - 2 * step;
    yhi = by + 2 * step;
    step /= 10.0;
  }
  return {bx, by};
}

inline Vector central_difference(const std::function<double(const Vector&)>& f,
                                 const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

inline Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

// Naive logistic loss 1/m sum log(1 + exp(-b_i (a_i . y + c))), no
// stabilization; only used at moderate scores.
inline double naive_logistic(const Matrix& a, const Vector& labels,
                             const Vector& y, double c) {
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double t = c;
    for (Index j = 0; j < a.cols(); ++j) t += a(i, j) * y[j];
    s += std::log(1.0 + std::exp(-labels[i] * t));
  }
  return s / static_cast<double>(a.rows());
}

}  // namespace oracle
