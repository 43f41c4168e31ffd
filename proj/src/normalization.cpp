#include "corrdet/normalization.hpp"

#include <cmath>
#include <stdexcept>

namespace corrdet {

namespace {

void check_dims(long p, long n) {
  if (p < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
  if (p > n) throw std::invalid_argument("theory requires p <= n");
}

void check_w(double w) {
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("w must lie in (0, 1)");
}

// log(1 - (p-1)/n) written as log(n-p+1) - log(n) so that p = n yields
// exactly -log(n).
double log_one_minus_ratio(long p, long n) {
  return std::log(static_cast<double>(n - p + 1)) - std::log(static_cast<double>(n));
}

}  // namespace

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::kGeneral: return "general";
    case RegimeKind::kNearSingular: return "near_singular";
    case RegimeKind::kSquare: return "square";
  }
  return "unknown";
}

RegimeKind regime_kind_from_string(const std::string& s) {
  if (s == "general") return RegimeKind::kGeneral;
  if (s == "near_singular" || s == "near") return RegimeKind::kNearSingular;
  if (s == "square") return RegimeKind::kSquare;
  throw std::invalid_argument("unknown regime: " + s);
}

double near_singular_threshold(long n, double w) {
  check_w(w);
  return std::ceil(std::pow(static_cast<double>(n), 1.0 - w));
}

Regime select_regime(long p, long n, double w) {
  check_dims(p, n);
  const double threshold = near_singular_threshold(n, w);
  RegimeKind kind = RegimeKind::kGeneral;
  if (p == n) {
    kind = RegimeKind::kSquare;
  } else if (static_cast<double>(n - p) <= threshold) {
    kind = RegimeKind::kNearSingular;
  }
  return Regime{kind, w, threshold};
}

Regime make_regime(RegimeKind kind, long p, long n, double w) {
  check_dims(p, n);
  const double threshold = near_singular_threshold(n, w);
  if (kind == RegimeKind::kSquare && p != n) throw std::invalid_argument("square regime requires p = n");
  if (kind == RegimeKind::kNearSingular && static_cast<double>(n - p) > threshold) {
    throw std::invalid_argument("near-singular regime requires n - p <= ceil(n^(1-w))");
  }
  return Regime{kind, w, threshold};
}

CLTConstants clt_constants(long p, long n, const Regime& regime) {
  check_dims(p, n);
  const double dp = static_cast<double>(p);
  const double dn = static_cast<double>(n);
  const double ell = log_one_minus_ratio(p, n);
  double mu = 0.0;
  double var = 0.0;
  switch (regime.kind) {
    case RegimeKind::kGeneral:
      mu = (dp - dn + 0.5) * ell - dp + dp / dn;
      var = -2.0 * ell - 2.0 * dp / dn;
      if (!(var > 0.0)) {
        throw std::domain_error(
            "variance formula non-positive: p too small relative to n for the general normalization");
      }
      break;
    case RegimeKind::kNearSingular:
      if (static_cast<double>(n - p) > regime.threshold) {
        throw std::invalid_argument("near-singular regime requires n - p <= ceil(n^(1-w))");
      }
      mu = (dp - dn + 0.5) * ell - dp;
      var = -2.0 * ell;
      if (!(var > 0.0)) throw std::domain_error("variance formula non-positive");
      break;
    case RegimeKind::kSquare:
      if (p != n) throw std::invalid_argument("square regime requires p = n");
      if (n < 2) throw std::domain_error("square regime requires n >= 2");
      mu = -0.5 * std::log(dn) - dn;
      var = 2.0 * std::log(dn);
      break;
  }
  return CLTConstants{mu, std::sqrt(var), regime, p, n};
}

double standardize_logdet(double logdet, const CLTConstants& c) { return (logdet - c.mu) / c.sigma; }

double log_cn(long p, long n) {
  check_dims(p, n);
  const double dn = static_cast<double>(n);
  return std::lgamma(dn + 1.0) - std::lgamma(dn - static_cast<double>(p) + 1.0) -
         static_cast<double>(p) * std::log(dn);
}

void to_json(nlohmann::json& j, const CLTConstants& c) {
  j = {{"mu", c.mu},
       {"sigma", c.sigma},
       {"regime", to_string(c.regime.kind)},
       {"w", c.regime.w},
       {"threshold", c.regime.threshold},
       {"p", c.p},
       {"n", c.n}};
}

}  // namespace corrdet
