#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egadm {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky hit a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(std::ptrdiff_t pivot)
      : std::runtime_error("matrix is not positive definite (pivot " +
                           std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

/// An iterative estimate ran out of iterations. Carries the best value seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// A solver produced a non-finite or exploding iterate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string variant, long iteration)
      : std::runtime_error("variant " + variant + " diverged at iteration " +
                           std::to_string(iteration)),
        variant_(std::move(variant)),
        iteration_(iteration) {}

  const std::string& variant() const noexcept { return variant_; }
  long iteration() const noexcept { return iteration_; }

 private:
  std::string variant_;
  long iteration_;
};

}  // namespace egadm
