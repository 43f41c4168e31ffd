#pragma once

#include <vector>

#include "corrdet/corrmat.hpp"
#include "json.hpp"

namespace corrdet {

enum class TruncationMode { kGlobalOnly, kMultilevel };

/// Rows row_lo..row_hi (1-based, inclusive) are truncated at `level`:
/// entries with |x| >= level are set to zero.
struct RowRange {
  long row_lo = 1;
  long row_hi = 1;
  double level = 0.0;
};

struct TruncationPlan {
  long p = 0;
  long n = 0;
  double a = 3.0;
  double c_frak = 0.1;
  TruncationMode mode = TruncationMode::kGlobalOnly;

  long s1 = 0;  // floor(p/100)
  long s2 = 0;  // floor(sqrt(-log(1 - (p-1)/n)))
  long s3 = 0;  // floor(p / log^a p), clamped to [0, p]
  double d_n = 0.0;  // s2^(1 - c)
  long K = 1;
  /// True when no K satisfies the block-count inequality and K was clamped
  /// to 1, or when a block boundary had to be forced monotone.
  bool degenerate = false;
  bool forced_global = false;

  std::vector<RowRange> ranges;

  /// Level applied to 1-based row i.
  double level_for_row(long i) const;
};

/// Level n^(2/3) log n shared by all rows away from the singular edge.
double global_truncation_level(long n);

TruncationPlan plan_truncation(long p, long n, double a, double c_frak, bool force_global = false);

struct TruncationOutcome {
  DataMatrix truncated;
  long changed = 0;
  std::vector<long> changed_by_range;
};

TruncationOutcome apply_truncation(const DataMatrix& x, const TruncationPlan& plan);

/// Counts of |X_ij| > n^{c_alpha} (the label matrix) and the two conditions
/// of the high-probability event B_n.
struct ExceedanceProfile {
  double c_alpha = 0.0;
  double eps_alpha = 0.0;
  double alpha = 0.0;
  double level = 0.0;
  std::vector<long> row_counts;
  std::vector<long> col_counts;
  long total = 0;
  long max_row = 0;
  long max_col = 0;
  double line_limit = 0.0;   // 2 (n^{1 - alpha c + eps} v log n)
  double total_limit = 0.0;  // n^{2 - alpha c + eps}
  bool lines_ok = false;
  bool total_ok = false;

  bool event_holds() const { return lines_ok && total_ok; }
};

inline constexpr double kDefaultEpsAlpha = 0.05;

ExceedanceProfile exceedance_profile(const DataMatrix& x, double c_alpha, double eps_alpha, double alpha);

std::string to_string(TruncationMode mode);
void to_json(nlohmann::json& j, const TruncationPlan& plan);

}  // namespace corrdet
