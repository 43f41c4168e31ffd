#pragma once

#include <string>

#include "json.hpp"

namespace corrdet {

enum class RegimeKind { kGeneral, kNearSingular, kSquare };

/// Which normalization applies, and the near-singularity threshold used to
/// decide it: NearSingular when 0 <= n - p <= ceil(n^(1-w)).
struct Regime {
  RegimeKind kind = RegimeKind::kGeneral;
  double w = 0.5;
  double threshold = 0.0;

  bool operator==(const Regime&) const = default;
};

inline constexpr double kDefaultW = 0.5;

std::string to_string(RegimeKind kind);
RegimeKind regime_kind_from_string(const std::string& s);

/// Centering and scale of log det R. `sigma` is the standard deviation, i.e.
/// the square root of the variance formula.
struct CLTConstants {
  double mu = 0.0;
  double sigma = 1.0;
  Regime regime;
  long p = 0;
  long n = 0;

  double variance() const { return sigma * sigma; }
};

/// ceil(n^(1-w)).
double near_singular_threshold(long n, double w);

Regime select_regime(long p, long n, double w = kDefaultW);

/// Regime of the requested kind; throws if it is inconsistent with (p, n, w).
Regime make_regime(RegimeKind kind, long p, long n, double w = kDefaultW);

CLTConstants clt_constants(long p, long n, const Regime& regime);

/// z = (logdet - mu) / sigma.
double standardize_logdet(double logdet, const CLTConstants& c);

/// c_n = sum_{i<p} log((n - i)/n) = log(n!/(n-p)!) - p log n, via log-gamma.
double log_cn(long p, long n);

void to_json(nlohmann::json& j, const CLTConstants& c);

}  // namespace corrdet
