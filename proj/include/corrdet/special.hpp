#pragma once

namespace corrdet {

/// Standard normal CDF, evaluated through erfc so both tails keep full
/// relative precision.
double normal_cdf(double x);

/// Upper tail 1 - normal_cdf(x) without cancellation.
double normal_sf(double x);

/// Inverse standard normal CDF for u in (0, 1). Rational initial guess plus
/// one Halley correction on erfc; absolute error well below 1e-10.
double normal_quantile(double u);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Gamma(x) as sign * exp(log|Gamma(x)|), for any x that is not a pole.
/// Throws std::domain_error within 1e-9 of a non-positive integer.
double gamma_fn(double x);

}  // namespace corrdet
