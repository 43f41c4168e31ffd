#include "corrdet/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrdet {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal_quantile: u must lie in (0, 1)");

  // Acklam's rational approximation, relative error ~1.15e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771670e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  constexpr double hi = 1.0 - lo;

  double x;
  if (u < lo) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= hi) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley step. Work with the smaller tail to keep the residual accurate.
  const double e = (u < 0.5) ? normal_cdf(x) - u : (1.0 - u) - normal_sf(x);
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  const double step = e / pdf;
  x -= step / (1.0 + 0.5 * x * step);
  return x;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double gamma_fn(double x) {
  if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-9) {
    throw std::domain_error("gamma function pole");
  }
  if (x > 0.0) return std::exp(std::lgamma(x));
  // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
  return std::numbers::pi / (std::sin(std::numbers::pi * x) * std::exp(std::lgamma(1.0 - x)));
}

}  // namespace corrdet
