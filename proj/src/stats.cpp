#include "corrdet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrdet/special.hpp"

namespace corrdet {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SampleMoments sample_moments(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("sample_moments needs at least one value");
  SampleMoments m;
  m.mean = pairwise_sum(v) / static_cast<double>(v.size());
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [&](double x) { return (x - m.mean) * (x - m.mean); });
    m.var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
  }
  return m;
}

double kolmogorov_pvalue(double lambda) {
  // Below 0.2 the series sums to 1 within rounding but converges slowly.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

double ks_distance_normal(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("KS distance needs at least one sample");
  const auto s = sorted_copy(samples);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

KsResult ks_statistic(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("KS statistic needs at least 2 samples");
  KsResult r;
  r.d = ks_distance_normal(samples);
  r.pvalue = kolmogorov_pvalue(std::sqrt(static_cast<double>(samples.size())) * r.d);
  return r;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two-sample KS needs non-empty samples");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.d = d;
  r.pvalue = kolmogorov_pvalue(std::sqrt(na * nb / (na + nb)) * d);
  return r;
}

double quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace corrdet
