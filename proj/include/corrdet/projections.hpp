#pragma once

#include <array>
#include <string>

#include "corrdet/corrmat.hpp"
#include "json.hpp"

namespace corrdet {

inline constexpr Index kDefaultProjectionCap = 512;

/// Q_i = P_i / (n - i), where P_i projects onto the orthogonal complement of
/// the span of the first i data rows.
struct NormalizedProjection {
  Index i = 0;
  Index n = 0;
  RowMatrix q;
};

/// S_k = sum_j q_jj^k for k = 1..4 (s[k-1]) and the largest diagonal entry.
struct DiagSummary {
  std::array<double, 4> s{};
  double max_diag = 0.0;

  double S(int k) const { return s.at(static_cast<std::size_t>(k - 1)); }
};

/// The seven deterministic bounds on |q_kl| sums, in this order:
///   0: max_k sum_l |q_kl|                       <= sqrt(n)/(n-i)
///   1: sum_{k!=l} |q_kl|                        <= n/sqrt(n-i)
///   2: max_k sum_{l!=s} |q_kl q_ks|             <= n/(n-i)^2
///   3: sum_{k,l,s distinct} |q_kl q_ks|         <= n/(n-i)
///   4: sum_{k,l,s distinct} |q_kl q_ks q_ls|    <= n/(n-i)^2
///   5: sum_{k,l,s,m distinct} |q_kl q_ks q_lm|  <= n/(n-i)^(3/2)
///   6: sum_{k,l,s,m distinct} |q_kl q_ks q_km|  <= n^(3/2)/(n-i)^2
inline constexpr std::size_t kQBoundCount = 7;

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct QBoundsReport {
  Index i = 0;
  Index n = 0;
  std::array<BoundCheck, kQBoundCount> bounds;

  bool all_ok() const;
};

/// Relative slack allowed on each bound.
inline constexpr double kQBoundSlack = 1e-8;

/// Left-hand sides of the seven bounds via per-row power sums; O(n^3) worst
/// case (one matrix product for the closed triangle sum).
std::array<double, kQBoundCount> q_bound_sums(const NormalizedProjection& q);

/// Right-hand sides for (n, i).
std::array<double, kQBoundCount> q_bound_limits(Index n, Index i);

NormalizedProjection projection_matrix(const DataMatrix& x, Index i, Index cap = kDefaultProjectionCap);

DiagSummary diag_summary(const NormalizedProjection& q);

QBoundsReport verify_q_bounds(const NormalizedProjection& q);

/// p_{i,ll} = 1 / (1 + v^T (B_{i(l)} B_{i(l)}^T)^{-1} v), v = column l of B_i.
/// Returns 0 when deleting column l drops the rank of B_i.
double diag_via_sherman_morrison(const DataMatrix& x, Index i, Index ell);

/// Eigenvalues of n^{-1} X X^T, reused across regularizers.
class GramSpectrum {
 public:
  explicit GramSpectrum(const DataMatrix& x);
  GramSpectrum(const DataMatrix& x, Index rows);

  /// (1/p) tr (n^{-1} X X^T + eps I)^{-1}.
  double trace_mean(double epsilon) const;

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double lambda_min() const;

 private:
  Eigen::VectorXd eigenvalues_;
};

struct ResolventProbe {
  double epsilon = 0.0;
  double trace_mean = 0.0;
};

ResolventProbe resolvent_trace(const DataMatrix& x, double epsilon);

/// s_p(eps) = 2 / (eps + 1 - p/n + sqrt((eps + 1 - p/n)^2 + 4 eps p/n)).
double stieltjes_formula(long p, long n, double epsilon);

struct EigenvalueMargin {
  double lambda_min = 0.0;
  double threshold = 0.0;
  double ratio = 0.0;
};

/// lambda_min(n^{-1} B_i B_i^T) against (1 - sqrt(i/n))^2.
EigenvalueMargin smallest_eigenvalue_margin(const DataMatrix& x, Index i);

void to_json(nlohmann::json& j, const QBoundsReport& r);

}  // namespace corrdet
