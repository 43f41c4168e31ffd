#include "corrdet/corrmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace corrdet {

namespace {

void check_shape(Index p, Index n) {
  if (p < 1) throw std::invalid_argument("data matrix needs at least one row");
  if (n < p) throw std::invalid_argument("theory requires p <= n");
}

[[noreturn]] void zero_row(Index i) {
  throw std::domain_error("degenerate observation: zero row norm (row " + std::to_string(i) + ")");
}

}  // namespace

DataMatrix::DataMatrix(Index p, Index n) {
  check_shape(p, n);
  values_ = RowMatrix::Zero(p, n);
}

DataMatrix::DataMatrix(RowMatrix values) : values_(std::move(values)) {
  check_shape(values_.rows(), values_.cols());
}

OrthonormalRowBasis::OrthonormalRowBasis(Index dim, Index capacity) : basis_(capacity, dim) {}

double OrthonormalRowBasis::project_out(Eigen::Ref<Eigen::VectorXd> v) const {
  const double before = v.squaredNorm();
  if (before == 0.0) return 0.0;
  if (size_ == 0) return 1.0;
  const auto q = basis_.topRows(size_);
  Eigen::VectorXd coeff = q * v;
  v.noalias() -= q.transpose() * coeff;
  double after = v.squaredNorm();
  if (after < 0.5 * before) {
    coeff.noalias() = q * v;
    v.noalias() -= q.transpose() * coeff;
    after = v.squaredNorm();
  }
  return std::min(after / before, 1.0);
}

void OrthonormalRowBasis::push_residual(const Eigen::VectorXd& residual) {
  if (size_ == basis_.rows()) throw std::logic_error("orthonormal basis capacity exceeded");
  const double norm = residual.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cannot extend basis by a zero vector");
  basis_.row(size_) = residual.transpose() / norm;
  ++size_;
}

double OrthonormalRowBasis::append(std::span<const double> v) {
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
  const double ratio = project_out(r);
  if (ratio > 0.0) push_residual(r);
  return ratio;
}

PerpendicularsAccumulator::PerpendicularsAccumulator(Index n, Index capacity, bool keep_deltas)
    : basis_(n, capacity), keep_deltas_(keep_deltas), work_(n) {
  if (keep_deltas_) deltas_.reserve(static_cast<std::size_t>(capacity));
}

void PerpendicularsAccumulator::add_row(std::span<const double> x) {
  const Index i = basis_.size();
  work_ = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Index>(x.size()));
  const double norm = work_.norm();
  if (!(norm > 0.0)) zero_row(i);
  work_ /= norm;
  const double delta2 = basis_.project_out(work_);
  if (!(delta2 >= kRankCollapseThreshold)) throw RankCollapseError(static_cast<std::size_t>(i));
  basis_.push_residual(work_);
  logdet_ += std::log(delta2);
  min_delta_ = std::min(min_delta_, delta2);
  if (keep_deltas_) deltas_.push_back(delta2);
}

LogDetResult PerpendicularsAccumulator::result() const {
  LogDetResult out;
  out.logdet = logdet_;
  out.method = LogDetMethod::kPerpendiculars;
  out.min_residual = min_delta_;
  if (keep_deltas_) out.deltas = deltas_;
  return out;
}

SelfNormalizedMatrix self_normalize(const DataMatrix& x) {
  RowMatrix y = x.values();
  for (Index i = 0; i < y.rows(); ++i) {
    const double norm = y.row(i).norm();
    if (!(norm > 0.0)) zero_row(i);
    y.row(i) /= norm;
  }
  return SelfNormalizedMatrix(std::move(y));
}

RowMatrix correlation_matrix(const DataMatrix& x) {
  const auto y = self_normalize(x);
  RowMatrix r(y.p(), y.p());
  r.noalias() = y.values() * y.values().transpose();
  // Symmetrize exactly; the product is symmetric up to rounding.
  for (Index i = 0; i < r.rows(); ++i) {
    for (Index j = 0; j < i; ++j) r(j, i) = r(i, j);
  }
  return r;
}

LogDetResult logdet_cholesky(const DataMatrix& x) {
  if (x.p() > kCholeskyMaxDim) {
    throw std::invalid_argument("Cholesky route limited to p <= " + std::to_string(kCholeskyMaxDim) +
                                "; use the perpendiculars route");
  }
  const RowMatrix r = correlation_matrix(x);
  const Index p = r.rows();
  RowMatrix l = RowMatrix::Zero(p, p);
  double logdet = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < p; ++j) {
    const double d = r(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) throw SingularMatrixError(static_cast<std::size_t>(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    logdet += std::log(d);
    min_pivot = std::min(min_pivot, d);
    for (Index i = j + 1; i < p; ++i) {
      l(i, j) = (r(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  LogDetResult out;
  out.logdet = logdet;
  out.method = LogDetMethod::kCholesky;
  out.min_residual = min_pivot;
  return out;
}

LogDetResult logdet_perpendiculars(const DataMatrix& x) {
  PerpendicularsAccumulator acc(x.n(), x.p(), true);
  for (Index i = 0; i < x.p(); ++i) acc.add_row(x.row(i));
  return acc.result();
}

LogDetResult logdet(const DataMatrix& x, LogDetMethod method) {
  return method == LogDetMethod::kCholesky ? logdet_cholesky(x) : logdet_perpendiculars(x);
}

}  // namespace corrdet
