#include "corrdet/projections.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrdet {

namespace {

// Relative squared residual below which a row is treated as lying in the
// span of its predecessors.
constexpr double kDependenceThreshold = 1e-20;

OrthonormalRowBasis leading_row_basis(const DataMatrix& x, Index i) {
  OrthonormalRowBasis basis(x.n(), std::max<Index>(i, 1));
  for (Index r = 0; r < i; ++r) {
    const double ratio = basis.append(x.row(r));
    if (!(ratio > kDependenceThreshold)) throw std::domain_error("rows not independent");
  }
  return basis;
}

const std::array<const char*, kQBoundCount> kBoundNames = {
    "row_abs_sum",        "offdiag_abs_sum",      "row_pair_products", "distinct_pair_products",
    "distinct_triangles", "distinct_path_quads", "distinct_star_quads"};

}  // namespace

bool QBoundsReport::all_ok() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.ok; });
}

NormalizedProjection projection_matrix(const DataMatrix& x, Index i, Index cap) {
  const Index n = x.n();
  if (n > cap) throw std::invalid_argument("n exceeds the dense projection cap");
  if (i < 0 || i > x.p()) throw std::invalid_argument("projection index out of range");
  if (i >= n) throw std::domain_error("zero projection");
  const auto basis = leading_row_basis(x, i);
  RowMatrix q = RowMatrix::Identity(n, n);
  if (i > 0) q.noalias() -= basis.vectors().transpose() * basis.vectors();
  q /= static_cast<double>(n - i);
  return NormalizedProjection{i, n, std::move(q)};
}

DiagSummary diag_summary(const NormalizedProjection& q) {
  DiagSummary out;
  for (Index j = 0; j < q.n; ++j) {
    const double d = q.q(j, j);
    double pw = d;
    for (int k = 0; k < 4; ++k) {
      out.s[static_cast<std::size_t>(k)] += pw;
      pw *= d;
    }
    out.max_diag = std::max(out.max_diag, d);
  }
  return out;
}

std::array<double, kQBoundCount> q_bound_sums(const NormalizedProjection& q) {
  const RowMatrix a = q.q.cwiseAbs();
  RowMatrix b = a;
  b.diagonal().setZero();

  // Per-row power sums, with and without the diagonal.
  const Eigen::VectorXd row_full = a.rowwise().sum();
  const Eigen::VectorXd row_full_sq = a.cwiseAbs2().rowwise().sum();
  const Eigen::VectorXd r = b.rowwise().sum();
  const Eigen::VectorXd w = b.cwiseAbs2().rowwise().sum();
  const Eigen::VectorXd t = b.array().cube().matrix().rowwise().sum();

  // Closed triangles: sum over distinct (k, l, s) of b_kl b_ks b_ls = tr(B^3).
  const RowMatrix b2 = b * b;
  const double triangles = b2.cwiseProduct(b).sum();

  std::array<double, kQBoundCount> s{};
  s[0] = row_full.maxCoeff();
  s[1] = r.sum();
  s[2] = (row_full.cwiseAbs2() - row_full_sq).maxCoeff();
  s[3] = (r.cwiseAbs2() - w).sum();
  s[4] = triangles;
  // Paths k-l, k-s, l-m with all four indices distinct, by inclusion-exclusion
  // over the coincidences s = l, m = s, m = k.
  s[5] = r.dot(b * r) - 2.0 * w.dot(r) - triangles + t.sum();
  // Stars centred at k: ordered distinct triples from the off-diagonal row,
  // p1^3 - 3 p1 p2 + 2 p3.
  s[6] = (r.array().cube() - 3.0 * r.array() * w.array() + 2.0 * t.array()).sum();
  return s;
}

std::array<double, kQBoundCount> q_bound_limits(Index n, Index i) {
  const double dn = static_cast<double>(n);
  const double m = static_cast<double>(n - i);
  return {std::sqrt(dn) / m,   dn / std::sqrt(m),           dn / (m * m), dn / m,
          dn / (m * m),        dn / std::pow(m, 1.5),       std::pow(dn, 1.5) / (m * m)};
}

QBoundsReport verify_q_bounds(const NormalizedProjection& q) {
  const auto lhs = q_bound_sums(q);
  const auto rhs = q_bound_limits(q.n, q.i);
  QBoundsReport report;
  report.i = q.i;
  report.n = q.n;
  for (std::size_t k = 0; k < kQBoundCount; ++k) {
    report.bounds[k] = BoundCheck{kBoundNames[k], lhs[k], rhs[k], lhs[k] <= rhs[k] * (1.0 + kQBoundSlack)};
  }
  return report;
}

double diag_via_sherman_morrison(const DataMatrix& x, Index i, Index ell) {
  if (i < 0 || i > x.p()) throw std::invalid_argument("projection index out of range");
  if (ell < 0 || ell >= x.n()) throw std::invalid_argument("column index out of range");
  if (i == 0) return 1.0;
  const auto bi = x.values().topRows(i);
  const Eigen::VectorXd v = bi.col(ell);
  Eigen::MatrixXd gram = bi * bi.transpose();
  gram.noalias() -= v * v.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    // B_{i(l)} lost rank. If B_i itself is full rank, e_l lies in its row
    // space and the diagonal of P_i vanishes.
    leading_row_basis(x, i);
    return 0.0;
  }
  const double quad = v.dot(llt.solve(v));
  return 1.0 / (1.0 + quad);
}

GramSpectrum::GramSpectrum(const DataMatrix& x) : GramSpectrum(x, x.p()) {}

GramSpectrum::GramSpectrum(const DataMatrix& x, Index rows) {
  if (rows < 1 || rows > x.p()) throw std::invalid_argument("row count out of range");
  const auto b = x.values().topRows(rows);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, rows);
  s.selfadjointView<Eigen::Lower>().rankUpdate(b, 1.0 / static_cast<double>(x.n()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  eigenvalues_ = solver.eigenvalues().cwiseMax(0.0);
}

double GramSpectrum::trace_mean(double epsilon) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("regularizer must be positive");
  return (eigenvalues_.array() + epsilon).inverse().mean();
}

double GramSpectrum::lambda_min() const { return eigenvalues_.minCoeff(); }

ResolventProbe resolvent_trace(const DataMatrix& x, double epsilon) {
  return ResolventProbe{epsilon, GramSpectrum(x).trace_mean(epsilon)};
}

double stieltjes_formula(long p, long n, double epsilon) {
  if (p < 1 || p > n) throw std::invalid_argument("stieltjes_formula requires 1 <= p <= n");
  if (!(epsilon > 0.0)) throw std::invalid_argument("regularizer must be positive");
  const double y = static_cast<double>(p) / static_cast<double>(n);
  const double a = epsilon + 1.0 - y;
  return 2.0 / (a + std::sqrt(a * a + 4.0 * epsilon * y));
}

EigenvalueMargin smallest_eigenvalue_margin(const DataMatrix& x, Index i) {
  if (i < 1 || i > x.p()) throw std::invalid_argument("row count out of range");
  const double lambda = GramSpectrum(x, i).lambda_min();
  const double root = 1.0 - std::sqrt(static_cast<double>(i) / static_cast<double>(x.n()));
  const double threshold = root * root;
  const double ratio = threshold > 0.0 ? lambda / threshold : std::numeric_limits<double>::infinity();
  return EigenvalueMargin{lambda, threshold, ratio};
}

void to_json(nlohmann::json& j, const QBoundsReport& r) {
  j = nlohmann::json{{"i", r.i}, {"n", r.n}, {"all_ok", r.all_ok()}};
  auto& arr = j["bounds"] = nlohmann::json::array();
  for (const auto& b : r.bounds) arr.push_back({{"name", b.name}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"ok", b.ok}});
}

}  // namespace corrdet
