#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrdet/heavytail.hpp"

namespace corrdet {

/// Exponents k_1 >= ... >= k_r >= 1 of the monomial Y_11^k1 ... Y_1r^kr.
class MomentIndex {
 public:
  explicit MomentIndex(std::vector<int> exponents);
  /// "2,2" or "4".
  static MomentIndex parse(const std::string& text);

  const std::vector<int>& exponents() const { return k_; }
  int r() const { return static_cast<int>(k_.size()); }
  int degree() const;
  bool all_even() const;
  std::string to_string() const;

 private:
  std::vector<int> k_;
};

struct MomentEstimate {
  double value = 0.0;
  double se = 0.0;
  long samples = 0;
  long n = 0;
  std::string law;
  long degenerate_rows = 0;
};

/// Monte Carlo estimate of E Y_11^k1 ... Y_1r^kr over `reps` self-normalized
/// rows of length n. For r = 1 each row contributes the monomial averaged over
/// all n coordinates; for r >= 2 it is averaged over min(n, 64) random tuples
/// of distinct coordinates.
MomentEstimate estimate_mixed_moment(const EntryLaw& law, long n, const MomentIndex& idx, long reps,
                                     std::uint64_t seed, unsigned workers = 1);

/// Limit of n^{N1(1-a/2) + q a/2} / L^{q-N1}(sqrt n) E(Y^{2k_1} ... Y^{2k_q}),
/// where N1 counts the k_i equal to 1. `idx` holds the even exponents 2k_i.
double moment_rate_limit(double alpha, const MomentIndex& idx);

/// The factor n^{N1(1-a/2) + q a/2} / L^{q-N1}(sqrt n) with L(x) = x^a P(|xi| > x).
double moment_rate_scaling(const StandardizedLaw& law, long n, const MomentIndex& idx);

/// Moments of the uniform law on the unit sphere of R^n (Gaussian rows):
/// prod (2k_j - 1)!! / (n (n+2) ... (n + 2K - 2)). Total degree <= 8.
double gaussian_moment_exact(long n, const MomentIndex& idx);

}  // namespace corrdet
