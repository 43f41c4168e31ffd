#include "corrdet/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrdet {

namespace {

// Exponent 1/(2 * 3^k) of the k-th block boundary.
double block_exponent(long k) { return 1.0 / (2.0 * std::pow(3.0, static_cast<double>(k))); }

}  // namespace

double TruncationPlan::level_for_row(long i) const {
  for (const auto& r : ranges) {
    if (i >= r.row_lo && i <= r.row_hi) return r.level;
  }
  throw std::out_of_range("row outside the truncation plan");
}

double global_truncation_level(long n) {
  const double dn = static_cast<double>(n);
  return std::pow(dn, 2.0 / 3.0) * std::log(dn);
}

TruncationPlan plan_truncation(long p, long n, double a, double c_frak, bool force_global) {
  if (p < 1 || n < p) throw std::invalid_argument("plan_truncation requires 1 <= p <= n");
  if (!(a > 2.0)) throw std::invalid_argument("parameter a must exceed 2");
  if (!(c_frak > 0.0 && c_frak < 0.25)) throw std::invalid_argument("parameter c must lie in (0, 1/4)");

  const double dp = static_cast<double>(p);
  const double dn = static_cast<double>(n);
  const double lp = std::log(dp);
  const double ln = std::log(dn);

  TruncationPlan plan;
  plan.p = p;
  plan.n = n;
  plan.a = a;
  plan.c_frak = c_frak;
  plan.forced_global = force_global;
  plan.s1 = p / 100;
  const double neg_log = std::log(dn) - std::log(static_cast<double>(n - p + 1));
  plan.s2 = static_cast<long>(std::floor(std::sqrt(neg_log)));
  if (lp > 0.0) {
    const double s3 = std::floor(dp / std::pow(lp, a));
    plan.s3 = static_cast<long>(std::clamp(s3, 0.0, dp));
  } else {
    plan.s3 = p;
  }
  plan.d_n = std::pow(static_cast<double>(plan.s2), 1.0 - c_frak);

  const double glevel = global_truncation_level(n);
  const double edge_rows = std::pow(dp, 1.0 / 6.0) * std::pow(std::max(lp, 0.0), 0.25);
  if (force_global || static_cast<double>(n - p) >= edge_rows) {
    plan.mode = TruncationMode::kGlobalOnly;
    plan.ranges.push_back({1, p, glevel});
    return plan;
  }
  plan.mode = TruncationMode::kMultilevel;

  // Number of blocks: p^{e(K+1)} log^{1/4} p < d_n <= p^{e(K)} log^{1/4} p.
  const double lp14 = std::pow(lp, 0.25);
  const long k_max = std::max<long>(1, static_cast<long>(std::floor(std::pow(ln, c_frak / 2.0))));
  plan.K = 0;
  for (long k = 1; k <= k_max; ++k) {
    const double upper = std::pow(dp, block_exponent(k)) * lp14;
    const double lower = std::pow(dp, block_exponent(k + 1)) * lp14;
    if (lower < plan.d_n && plan.d_n <= upper) plan.K = k;
  }
  if (plan.K == 0) {
    plan.K = 1;
    plan.degenerate = true;
  }

  const long cut = std::clamp<long>(static_cast<long>(std::floor(dp - plan.d_n)), 0, p);
  const double top_coef = 1.0 / 3.0;
  long pos = 0;
  auto local_level = [&](long i) {
    const double gap = static_cast<double>(std::max<long>(p - i, 1));
    return std::pow(dn * gap, top_coef) * std::pow(ln, 1.0 / 12.0);
  };
  auto emit = [&](double raw_end, double level) {
    long end = static_cast<long>(std::floor(raw_end));
    if (end < pos) {
      plan.degenerate = true;
      return;
    }
    end = std::min(end, cut);
    if (end > pos) plan.ranges.push_back({pos + 1, end, level});
    pos = std::max(pos, end);
  };
  auto emit_local = [&](double raw_end) {
    long end = static_cast<long>(std::floor(raw_end));
    if (end < pos) {
      plan.degenerate = true;
      return;
    }
    end = std::min(end, cut);
    for (long i = pos + 1; i <= end; ++i) plan.ranges.push_back({i, i, local_level(i)});
    pos = std::max(pos, end);
  };

  emit(dp - std::pow(dp, 1.0 / 6.0) * lp14, glevel);
  for (long k = 1; k <= plan.K; ++k) {
    const double ek = block_exponent(k);
    const double ek1 = block_exponent(k + 1);
    emit(dp - std::pow(dp, ek1) * std::pow(lp, 5.0 / 12.0),
         std::pow(dn * std::pow(dp, ek), top_coef) * std::pow(ln, 1.0 / 6.0));
    emit_local(dp - std::pow(dp, ek1) * lp14);
  }
  if (pos < cut) {
    // The block schedule did not reach the last block at this size.
    plan.degenerate = true;
    emit_local(static_cast<double>(cut));
  }
  if (pos < p) {
    const double level = std::pow(dn * std::max(plan.d_n, 1.0), top_coef) * std::pow(ln, 1.0 / 12.0);
    plan.ranges.push_back({pos + 1, p, level});
  }
  return plan;
}

TruncationOutcome apply_truncation(const DataMatrix& x, const TruncationPlan& plan) {
  if (plan.p != x.p() || plan.n != x.n()) throw std::invalid_argument("truncation plan does not match the data shape");
  TruncationOutcome out{x, 0, std::vector<long>(plan.ranges.size(), 0)};
  for (std::size_t r = 0; r < plan.ranges.size(); ++r) {
    const auto& range = plan.ranges[r];
    for (long i = range.row_lo; i <= range.row_hi; ++i) {
      for (double& v : out.truncated.row(i - 1)) {
        if (std::abs(v) >= range.level) {
          v = 0.0;
          ++out.changed_by_range[r];
        }
      }
    }
    out.changed += out.changed_by_range[r];
  }
  return out;
}

ExceedanceProfile exceedance_profile(const DataMatrix& x, double c_alpha, double eps_alpha, double alpha) {
  if (!(c_alpha > 0.0 && c_alpha <= 2.0 / 3.0)) throw std::invalid_argument("c_alpha must lie in (0, 2/3]");
  if (!(eps_alpha > 0.0)) throw std::invalid_argument("eps_alpha must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double dn = static_cast<double>(x.n());
  ExceedanceProfile prof;
  prof.c_alpha = c_alpha;
  prof.eps_alpha = eps_alpha;
  prof.alpha = alpha;
  prof.level = std::pow(dn, c_alpha);
  prof.row_counts.assign(static_cast<std::size_t>(x.p()), 0);
  prof.col_counts.assign(static_cast<std::size_t>(x.n()), 0);
  for (Index i = 0; i < x.p(); ++i) {
    for (Index j = 0; j < x.n(); ++j) {
      if (std::abs(x(i, j)) > prof.level) {
        ++prof.row_counts[static_cast<std::size_t>(i)];
        ++prof.col_counts[static_cast<std::size_t>(j)];
        ++prof.total;
      }
    }
  }
  prof.max_row = *std::max_element(prof.row_counts.begin(), prof.row_counts.end());
  prof.max_col = *std::max_element(prof.col_counts.begin(), prof.col_counts.end());
  prof.line_limit = 2.0 * std::max(std::pow(dn, 1.0 - alpha * c_alpha + eps_alpha), std::log(dn));
  prof.total_limit = std::pow(dn, 2.0 - alpha * c_alpha + eps_alpha);
  prof.lines_ok = static_cast<double>(prof.max_row + prof.max_col) <= prof.line_limit;
  prof.total_ok = static_cast<double>(prof.total) <= prof.total_limit;
  return prof;
}

std::string to_string(TruncationMode mode) {
  return mode == TruncationMode::kGlobalOnly ? "global_only" : "multilevel";
}

void to_json(nlohmann::json& j, const TruncationPlan& plan) {
  j = {{"p", plan.p},   {"n", plan.n},   {"a", plan.a},   {"c_frak", plan.c_frak},
       {"mode", to_string(plan.mode)},   {"s1", plan.s1}, {"s2", plan.s2},
       {"s3", plan.s3}, {"d_n", plan.d_n}, {"K", plan.K}, {"degenerate", plan.degenerate},
       {"forced_global", plan.forced_global}};
  auto& arr = j["ranges"] = nlohmann::json::array();
  for (const auto& r : plan.ranges) arr.push_back({{"row_lo", r.row_lo}, {"row_hi", r.row_hi}, {"level", r.level}});
}

}  // namespace corrdet
