#include "corrdet/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "corrdet/errors.hpp"
#include "corrdet/parallel.hpp"
#include "corrdet/special.hpp"
#include "corrdet/stats.hpp"

namespace corrdet {

namespace {

constexpr long kMaxTuples = 64;
constexpr int kMaxGaussianDegree = 8;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void check_alpha(double alpha) {
  if (!(alpha > 2.0 && alpha < 4.0)) throw std::invalid_argument("moment rate requires alpha in (2, 4)");
}

struct RateShape {
  int n1 = 0;
  int q = 0;
};

RateShape rate_shape(const MomentIndex& idx) {
  if (!idx.all_even()) throw std::invalid_argument("moment rate requires even exponents");
  RateShape s;
  s.q = idx.r();
  s.n1 = static_cast<int>(std::count(idx.exponents().begin(), idx.exponents().end(), 2));
  return s;
}

}  // namespace

MomentIndex::MomentIndex(std::vector<int> exponents) : k_(std::move(exponents)) {
  if (k_.empty()) throw std::invalid_argument("moment index needs at least one exponent");
  if (std::any_of(k_.begin(), k_.end(), [](int k) { return k < 1; })) {
    throw std::invalid_argument("moment exponents must be positive integers");
  }
  std::sort(k_.begin(), k_.end(), std::greater<>());
}

MomentIndex MomentIndex::parse(const std::string& text) {
  std::vector<int> k;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad moment index: " + text);
    }
    if (used != item.size()) throw std::invalid_argument("bad moment index: " + text);
    k.push_back(v);
  }
  return MomentIndex(std::move(k));
}

int MomentIndex::degree() const { return std::accumulate(k_.begin(), k_.end(), 0); }

bool MomentIndex::all_even() const {
  return std::all_of(k_.begin(), k_.end(), [](int k) { return k % 2 == 0; });
}

std::string MomentIndex::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k_[i]);
  }
  return s;
}

MomentEstimate estimate_mixed_moment(const EntryLaw& law, long n, const MomentIndex& idx, long reps,
                                     std::uint64_t seed, unsigned workers) {
  if (n < 1) throw std::invalid_argument("row length must be positive");
  if (idx.r() > n) throw std::invalid_argument("moment index longer than the row");
  if (reps < 100) throw std::invalid_argument("moment estimation needs reps >= 100");
  if (reps > static_cast<long>(UINT32_MAX)) throw std::invalid_argument("too many rows");

  const auto& k = idx.exponents();
  const int r = idx.r();
  const long tuples = std::min(n, kMaxTuples);
  std::vector<double> values(static_cast<std::size_t>(reps));
  std::vector<int> retries(static_cast<std::size_t>(reps), 0);

  parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t row) {
    std::vector<double> y(static_cast<std::size_t>(n));
    std::vector<long> perm;
    double norm2 = 0.0;
    for (std::uint32_t attempt = 0;; ++attempt) {
      const CounterRng rng(StreamId{seed, purpose::kMomentRows + attempt * purpose::kAttemptStride,
                                    static_cast<std::uint32_t>(row)});
      fill(law, rng, 0, y);
      norm2 = 0.0;
      for (double v : y) norm2 += v * v;
      if (norm2 > 0.0) break;
      ++retries[row];
      if (attempt > 8) throw NumericError("repeated zero rows in moment estimation");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : y) v *= inv;

    double acc = 0.0;
    if (r == 1) {
      for (double v : y) acc += ipow(v, k[0]);
      values[row] = acc / static_cast<double>(n);
      return;
    }
    perm.resize(static_cast<std::size_t>(n));
    RngCursor cursor(StreamId{seed, purpose::kTuples, static_cast<std::uint32_t>(row)});
    for (long t = 0; t < tuples; ++t) {
      std::iota(perm.begin(), perm.end(), 0L);
      double prod = 1.0;
      // Partial Fisher-Yates: the first r slots form a uniform distinct tuple.
      for (int s = 0; s < r; ++s) {
        const long span = n - s;
        auto pick = s + static_cast<long>(cursor.uniform() * static_cast<double>(span));
        pick = std::min(pick, n - 1);
        std::swap(perm[static_cast<std::size_t>(s)], perm[static_cast<std::size_t>(pick)]);
        prod *= ipow(y[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])], k[static_cast<std::size_t>(s)]);
      }
      acc += prod;
    }
    values[row] = acc / static_cast<double>(tuples);
  });

  const long degenerate = std::accumulate(retries.begin(), retries.end(), 0L);
  if (static_cast<double>(degenerate) > 1e-4 * static_cast<double>(reps)) {
    throw NumericError("more than 0.01% of rows were degenerate (zero norm)");
  }
  const auto m = sample_moments(values);
  MomentEstimate est;
  est.value = m.mean;
  est.se = std::sqrt(m.var / static_cast<double>(reps));
  est.samples = reps;
  est.n = n;
  est.law = describe(law);
  est.degenerate_rows = degenerate;
  return est;
}

double moment_rate_limit(double alpha, const MomentIndex& idx) {
  check_alpha(alpha);
  const auto shape = rate_shape(idx);
  const double half = alpha / 2.0;
  double log_value = (shape.q - shape.n1) * std::log(half);
  double sign = 1.0;
  try {
    const double lead = shape.n1 * (1.0 - half) + shape.q * half;
    const double g = gamma_fn(lead);
    sign *= g < 0 ? -1.0 : 1.0;
    log_value += std::log(std::abs(g));
    int total = 0;
    for (int e : idx.exponents()) {
      const int ki = e / 2;
      total += ki;
      if (ki >= 2) {
        const double gi = gamma_fn(ki - half);
        sign *= gi < 0 ? -1.0 : 1.0;
        log_value += std::log(std::abs(gi));
      }
    }
    log_value -= log_gamma(static_cast<double>(total));
  } catch (const std::domain_error&) {
    throw std::domain_error("formula pole at this (alpha, index)");
  }
  return sign * std::exp(log_value);
}

double moment_rate_scaling(const StandardizedLaw& law, long n, const MomentIndex& idx) {
  const double alpha = law.base.alpha();
  check_alpha(alpha);
  const auto shape = rate_shape(idx);
  const double dn = static_cast<double>(n);
  const double expo = shape.n1 * (1.0 - alpha / 2.0) + shape.q * alpha / 2.0;
  const double ell = standardized_slowly_varying(law, std::sqrt(dn));
  return std::pow(dn, expo) / std::pow(ell, shape.q - shape.n1);
}

double gaussian_moment_exact(long n, const MomentIndex& idx) {
  if (n < 1) throw std::invalid_argument("row length must be positive");
  if (idx.degree() > kMaxGaussianDegree) {
    throw std::invalid_argument("not implemented: exact sphere moments above total degree 8");
  }
  if (idx.r() > n) throw std::invalid_argument("moment index longer than the row");
  if (!idx.all_even()) return 0.0;
  double num = 1.0;
  int total = 0;
  for (int e : idx.exponents()) {
    for (int odd = e - 1; odd > 1; odd -= 2) num *= odd;
    total += e / 2;
  }
  double den = 1.0;
  for (int m = 0; m < total; ++m) den *= static_cast<double>(n + 2 * m);
  return num / den;
}

}  // namespace corrdet
