#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "corrdet/errors.hpp"

namespace corrdet {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// p x n data, one observation vector per row. Enforces 1 <= p <= n.
class DataMatrix {
 public:
  DataMatrix(Index p, Index n);
  explicit DataMatrix(RowMatrix values);

  Index p() const { return values_.rows(); }
  Index n() const { return values_.cols(); }

  const RowMatrix& values() const { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  double& operator()(Index i, Index j) { return values_(i, j); }

  std::span<double> row(Index i) { return {values_.row(i).data(), static_cast<std::size_t>(n())}; }
  std::span<const double> row(Index i) const {
    return {values_.row(i).data(), static_cast<std::size_t>(n())};
  }

 private:
  RowMatrix values_;
};

/// Rows scaled to unit Euclidean norm: Y_ij = X_ij / ||x_i||.
class SelfNormalizedMatrix {
 public:
  Index p() const { return values_.rows(); }
  Index n() const { return values_.cols(); }
  const RowMatrix& values() const { return values_; }

 private:
  friend SelfNormalizedMatrix self_normalize(const DataMatrix& x);
  explicit SelfNormalizedMatrix(RowMatrix v) : values_(std::move(v)) {}
  RowMatrix values_;
};

enum class LogDetMethod { kCholesky, kPerpendiculars };

struct LogDetResult {
  double logdet = 0.0;
  /// Squared perpendiculars Delta^2_1..Delta^2_p; perpendiculars route only.
  std::optional<std::vector<double>> deltas;
  LogDetMethod method = LogDetMethod::kPerpendiculars;
  /// Smallest Delta^2 (perpendiculars) or smallest squared pivot (Cholesky).
  double min_residual = 1.0;
};

/// Threshold on Delta^2 below which the row is declared linearly dependent.
inline constexpr double kRankCollapseThreshold = 1e-300;

/// Largest p for which the Cholesky route materializes R.
inline constexpr Index kCholeskyMaxDim = 2000;

/// Orthonormal basis of the span of the rows appended so far, grown one row
/// at a time by classical Gram-Schmidt with a conditional second pass
/// (applied when the residual keeps less than 1/sqrt(2) of the input norm).
class OrthonormalRowBasis {
 public:
  OrthonormalRowBasis(Index dim, Index capacity);

  Index dim() const { return basis_.cols(); }
  Index size() const { return size_; }

  /// Replaces v by its component orthogonal to the current span and returns
  /// the ratio ||residual||^2 / ||v||^2 (0 for v = 0).
  double project_out(Eigen::Ref<Eigen::VectorXd> v) const;

  /// Appends a residual returned by project_out. Requires a non-zero vector.
  void push_residual(const Eigen::VectorXd& residual);

  /// project_out followed by push_residual when the residual is non-zero.
  double append(std::span<const double> v);

  auto vectors() const { return basis_.topRows(size_); }

 private:
  RowMatrix basis_;
  Index size_ = 0;
};

/// Accumulates log det R row by row as sum of log Delta^2.
class PerpendicularsAccumulator {
 public:
  PerpendicularsAccumulator(Index n, Index capacity, bool keep_deltas);

  /// Adds one raw data row. Throws on a zero row or a rank collapse.
  void add_row(std::span<const double> x);

  Index rows() const { return basis_.size(); }
  LogDetResult result() const;

 private:
  OrthonormalRowBasis basis_;
  double logdet_ = 0.0;
  double min_delta_ = 1.0;
  bool keep_deltas_;
  std::vector<double> deltas_;
  Eigen::VectorXd work_;
};

SelfNormalizedMatrix self_normalize(const DataMatrix& x);

/// R = Y Y^T.
RowMatrix correlation_matrix(const DataMatrix& x);

/// 2 sum log diag(chol(R)); p <= kCholeskyMaxDim.
LogDetResult logdet_cholesky(const DataMatrix& x);

/// Method of perpendiculars; returns the Delta^2 sequence.
LogDetResult logdet_perpendiculars(const DataMatrix& x);

LogDetResult logdet(const DataMatrix& x, LogDetMethod method);

}  // namespace corrdet
