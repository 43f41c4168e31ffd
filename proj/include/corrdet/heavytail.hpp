#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "corrdet/rng.hpp"
#include "json.hpp"

namespace corrdet {

/// L(x) = c. The constant cancels in the normalized tail; it is kept so that
/// law descriptions round-trip.
struct ConstantSV {
  double c = 1.0;
  bool operator==(const ConstantSV&) const = default;
};

/// L(x) = (log x)^gamma.
struct LogPowerSV {
  double gamma = 0.0;
  bool operator==(const LogPowerSV&) const = default;
};

using SlowlyVarying = std::variant<ConstantSV, LogPowerSV>;

/// Magnitude law with P(M > x) = L(x) x^-alpha / (L(x0) x0^-alpha) for
/// x >= x0 and 1 below; the signed variate is +M with probability `skew`.
///
/// Construction rejects x0 <= exp(gamma/alpha) for LogPower, where the tail
/// would not be monotone and inverse-transform sampling breaks down.
class TailLaw {
 public:
  TailLaw(double alpha, SlowlyVarying sv, double x0, double skew);

  static TailLaw pareto(double alpha, double x0 = 1.0, double skew = 0.5) {
    return TailLaw(alpha, ConstantSV{1.0}, x0, skew);
  }

  double alpha() const { return alpha_; }
  const SlowlyVarying& slowly_varying() const { return sv_; }
  double x0() const { return x0_; }
  double skew() const { return skew_; }
  bool is_constant_sv() const { return std::holds_alternative<ConstantSV>(sv_); }

  /// log P(M > x); 0 for x <= x0.
  double log_tail(double x) const;

  /// Magnitude M with P(M > M(u)) = u, u in (0, 1].
  double magnitude_quantile(double survival) const;

  bool operator==(const TailLaw&) const = default;

 private:
  double alpha_;
  SlowlyVarying sv_;
  double x0_;
  double skew_;
};

/// xi = (sign * M - shift) / scale, with E xi = 0 and E xi^2 = 1.
struct StandardizedLaw {
  TailLaw base;
  double shift = 0.0;
  double scale = 1.0;

  double transform(double magnitude, bool positive) const {
    return ((positive ? magnitude : -magnitude) - shift) / scale;
  }
};

struct GaussianLaw {};

/// Entry distribution of a data matrix.
using EntryLaw = std::variant<GaussianLaw, StandardizedLaw>;

/// P(M > x) for x >= 0.
double tail_prob(const TailLaw& law, double x);

/// P(|xi| > x) for the standardized variate, exact.
double standardized_tail_prob(const StandardizedLaw& law, double x);

/// x^alpha P(|xi| > x): the slowly varying factor of the standardized variate.
double standardized_slowly_varying(const StandardizedLaw& law, double x);

/// E M^k by closed form (Constant) or log-scale quadrature (LogPower).
/// Requires k < alpha.
double magnitude_moment(const TailLaw& law, double k);

StandardizedLaw standardize(const TailLaw& law);

enum class TailSide { kBelow, kAbove };

/// E M^beta 1(M <= x) or E M^beta 1(M > x), by adaptive quadrature in
/// t = log x.
double truncated_moment(const TailLaw& law, double beta, double x, TailSide side);

/// Draw j of the given stream. One counter block per draw.
double draw(const EntryLaw& law, const CounterRng& rng, std::uint64_t j);

/// Fills `out` with draws first_index, first_index + 1, ...
void fill(const EntryLaw& law, const CounterRng& rng, std::uint64_t first_index,
          std::span<double> out);

/// `count` i.i.d. draws of xi, determined by (seed, count) alone.
std::vector<double> sample(const StandardizedLaw& law, std::uint64_t seed, std::size_t count);

std::string describe(const EntryLaw& law);

void to_json(nlohmann::json& j, const TailLaw& law);
TailLaw tail_law_from_json(const nlohmann::json& j);

}  // namespace corrdet
