#pragma once

#include <span>
#include <vector>

namespace corrdet {

struct KsResult {
  double d = 0.0;
  double pvalue = 1.0;
};

/// Sum by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);

struct SampleMoments {
  double mean = 0.0;
  double var = 0.0;  // unbiased; 0 for a single sample
};

SampleMoments sample_moments(std::span<const double> v);

/// Q_KS(lambda) = sum_{k>=1} (-1)^(k-1) 2 exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_pvalue(double lambda);

/// sup |F_N - Phi| for N >= 1 samples.
double ks_distance_normal(std::span<const double> samples);

/// One-sample KS against Phi with the asymptotic p-value. Requires N >= 2.
KsResult ks_statistic(std::span<const double> samples);

/// Two-sample KS with effective size N M / (N + M).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Linear interpolation between order statistics; prob in [0, 1].
double quantile(std::span<const double> sorted, double prob);

std::vector<double> sorted_copy(std::span<const double> v);

}  // namespace corrdet
