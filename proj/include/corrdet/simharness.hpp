#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrdet/corrmat.hpp"
#include "corrdet/heavytail.hpp"
#include "corrdet/normalization.hpp"
#include "corrdet/projections.hpp"
#include "corrdet/stats.hpp"
#include "corrdet/truncation.hpp"
#include "json.hpp"

namespace corrdet {

struct SimConfig {
  long p = 0;
  long n = 0;
  EntryLaw law = GaussianLaw{};
  long reps = 1;
  std::uint64_t seed = 0;
  /// Empty selects the regime from (p, n, w).
  std::optional<RegimeKind> regime;
  double w = kDefaultW;
  LogDetMethod method = LogDetMethod::kPerpendiculars;
  unsigned workers = 1;
  /// When set, Delta^2_{i+1} at this i is recorded for every replication.
  std::optional<long> track_delta;

  void validate() const;
};

struct SimResult {
  SimConfig config;
  CLTConstants consts;
  std::vector<double> z;
  std::vector<double> logdet;
  std::vector<double> tracked_delta;
  double ks = 0.0;
  double ks_pvalue = 1.0;
  double mean = 0.0;
  double var = 0.0;
  long retried = 0;
  double wall_seconds = 0.0;
};

/// p x n matrix whose entry (i, j) is draw i * n + j of `stream`.
DataMatrix sample_matrix(const EntryLaw& law, long p, long n, StreamId stream);

/// Gaussian rows sqrt(1 - rho) g_i + sqrt(rho) h sharing the common vector h.
DataMatrix equicorrelated_gaussian(long p, long n, double rho, StreamId stream);

CLTConstants constants_for(const SimConfig& config);

/// Replication r draws its matrix from stream (seed, kData, r); a replication
/// that hits a numeric breakdown is redrawn once from a fresh stream.
SimResult run_clt_experiment(const SimConfig& config);

/// log det R for Gaussian data sampled as a product of independent
/// Beta((n - i)/2, i/2) variables, i = 1..p-1.
std::vector<double> gaussian_beta_oracle(long p, long n, long reps, std::uint64_t seed, unsigned workers = 1);

/// Samples of the Beta((n - i)/2, i/2) factor alone.
std::vector<double> gaussian_beta_marginal(long n, long i, long reps, std::uint64_t seed);

struct ReplacedPair {
  double logdet_R = 0.0;
  double logdet_R_check = 0.0;
  double sigma_scaled_diff = 0.0;
};

struct ReplacementResult {
  long s1 = 0;
  bool skipped = false;
  std::string warning;
  CLTConstants consts;
  std::vector<ReplacedPair> pairs;
  double median = 0.0;
  double q90 = 0.0;
  double max = 0.0;
};

/// The last s1 rows (default floor(p/100)) of a second matrix are replaced by
/// standard Gaussian rows; the leading rows are shared with the first.
/// Reports |log det R_check - log det R| / sigma_n.
ReplacementResult replacement_experiment(const SimConfig& config, std::optional<long> s1_override = {});

struct IndependenceResult {
  double logdet = 0.0;
  double z = 0.0;
  double pvalue = 1.0;
  bool reject = false;
  CLTConstants consts;
};

/// Two-sided decision for an already standardized statistic.
IndependenceResult independence_decision(double z, double level, const CLTConstants& consts);

IndependenceResult independence_test(const DataMatrix& data, double level, double w = kDefaultW,
                                     std::optional<RegimeKind> regime = {});

struct TruncationExperimentResult {
  TruncationPlan plan;
  std::vector<double> z_plain;
  std::vector<double> z_truncated;
  KsResult paired_ks;
  double max_abs_diff = 0.0;
  long reps_changed = 0;
  long entries_changed = 0;
  /// Fraction of entries zeroed, per replication.
  std::vector<double> changed_fraction;
  double event_rate = 0.0;
  double c_alpha = 0.0;
  double eps_alpha = 0.0;
};

struct TruncationSettings {
  double a = 3.0;
  double c_frak = 0.1;
  bool force_global = false;
  double c_alpha = 1.0 / 3.0;
  double eps_alpha = kDefaultEpsAlpha;
};

/// Standardized statistics of the same matrices with and without truncation,
/// plus the rate at which the exceedance event holds.
TruncationExperimentResult truncation_experiment(const SimConfig& config, const TruncationSettings& settings);

struct ResolventRow {
  double epsilon = 0.0;
  double empirical = 0.0;
  double formula = 0.0;
  double rel_error = 0.0;
};

struct ResolventResult {
  std::vector<ResolventRow> rows;
  /// tr G(eps) is non-increasing along the sorted grid in every instance.
  bool monotone = true;
};

ResolventResult resolvent_experiment(const SimConfig& config, std::vector<double> eps_grid);

/// Bound reports for `instances` matrices with max(i, 1) rows of length n.
std::vector<QBoundsReport> bounds_experiment(const EntryLaw& law, long n, long i, long instances,
                                             std::uint64_t seed);

void to_json(nlohmann::json& j, const SimConfig& c);

}  // namespace corrdet
