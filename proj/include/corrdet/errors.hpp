#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corrdet {

/// Floating-point breakdown of a decomposition (as opposed to a usage error).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-positive pivot in the Cholesky route.
class SingularMatrixError : public NumericError {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : NumericError("correlation matrix numerically singular (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Squared perpendicular below the collapse threshold.
class RankCollapseError : public NumericError {
 public:
  explicit RankCollapseError(std::size_t row)
      : NumericError("rank collapse at row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace corrdet
