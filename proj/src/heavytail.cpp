#include "corrdet/heavytail.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "corrdet/quadrature.hpp"

namespace corrdet {

namespace {

constexpr double kQuadTol = 1e-10;

double sv_gamma(const SlowlyVarying& sv) {
  if (const auto* lp = std::get_if<LogPowerSV>(&sv)) return lp->gamma;
  return 0.0;
}

// Integrand of E M^k written in t = log x after integration by parts:
// k e^{kt} P(M > e^t).
double moment_density(const TailLaw& law, double k, double t) {
  return k * std::exp(k * t + law.log_tail(std::exp(t)));
}

// Upper limit in t where the remaining tail mass of the moment integrand is
// negligible. The integrand decays like exp(-(alpha - k) t) t^gamma.
double tail_cutoff(const TailLaw& law, double k, double t_start) {
  const double rate = law.alpha() - k;
  double width = 8.0;
  while (width < 1e5) {
    const double t = t_start + width;
    if (moment_density(law, k, t) / rate < 1e-15) return t;
    width *= 2.0;
  }
  throw std::runtime_error("moment integrand does not decay; alpha too close to the moment order");
}

}  // namespace

TailLaw::TailLaw(double alpha, SlowlyVarying sv, double x0, double skew)
    : alpha_(alpha), sv_(sv), x0_(x0), skew_(skew) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("tail index must be positive");
  if (!(skew >= 0.0 && skew <= 1.0)) throw std::invalid_argument("skew must be a probability");
  if (const auto* c = std::get_if<ConstantSV>(&sv_)) {
    if (!(c->c > 0.0)) throw std::invalid_argument("constant slowly varying factor must be positive");
    if (!(x0 >= 1.0)) throw std::invalid_argument("tail onset x0 must be at least 1");
  } else {
    const double g = std::get<LogPowerSV>(sv_).gamma;
    if (!(g >= 0.0)) throw std::invalid_argument("log-power exponent must be non-negative");
    if (!(x0 > 1.0) || !(x0 > std::exp(g / alpha))) {
      throw std::invalid_argument("log-power tail requires x0 > max(1, exp(gamma/alpha)) for monotonicity");
    }
  }
}

double TailLaw::log_tail(double x) const {
  if (x <= x0_) return 0.0;
  const double g = sv_gamma(sv_);
  double lt = -alpha_ * (std::log(x) - std::log(x0_));
  if (g != 0.0) lt += g * (std::log(std::log(x)) - std::log(std::log(x0_)));
  return lt;
}

double TailLaw::magnitude_quantile(double survival) const {
  if (!(survival > 0.0 && survival <= 1.0)) throw std::domain_error("survival probability must lie in (0, 1]");
  const double target = -std::log(survival);
  if (target == 0.0) return x0_;
  if (is_constant_sv()) return x0_ * std::exp(target / alpha_);

  // Solve h(s) = alpha (s - s0) - gamma (log s - log s0) = target in s = log x.
  // h is increasing and convex for s > gamma/alpha, so Newton started to the
  // right of the root decreases monotonically onto it.
  const double g = sv_gamma(sv_);
  const double s0 = std::log(x0_);
  auto h = [&](double s) { return alpha_ * (s - s0) - g * (std::log(s) - std::log(s0)); };
  double s = s0 + target / (alpha_ - g / s0);
  for (int iter = 0; iter < 200; ++iter) {
    const double step = (h(s) - target) / (alpha_ - g / s);
    s -= step;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(s))) return std::exp(s);
  }
  throw std::logic_error("log-power inverse transform: Newton iteration did not converge");
}

double tail_prob(const TailLaw& law, double x) {
  if (x <= law.x0()) return 1.0;
  return std::exp(law.log_tail(x));
}

double standardized_tail_prob(const StandardizedLaw& law, double x) {
  // P(|M - c| > y) = P(M > c + y) + P(M < c - y), with P(M > z) = 1 for z <= x0.
  const double y = x * law.scale;
  auto two_sided = [&](double c) {
    return tail_prob(law.base, c + y) + (1.0 - tail_prob(law.base, c - y));
  };
  const double q = law.base.skew();
  return q * two_sided(law.shift) + (1.0 - q) * two_sided(-law.shift);
}

double standardized_slowly_varying(const StandardizedLaw& law, double x) {
  return std::pow(x, law.base.alpha()) * standardized_tail_prob(law, x);
}

double magnitude_moment(const TailLaw& law, double k) {
  const double alpha = law.alpha();
  if (!(k < alpha)) throw std::domain_error("divergent moment");
  const double x0 = law.x0();
  if (law.is_constant_sv()) return std::pow(x0, k) * alpha / (alpha - k);
  const double t0 = std::log(x0);
  const double t_end = tail_cutoff(law, k, t0);
  const auto q = adaptive_simpson([&](double t) { return moment_density(law, k, t); }, t0, t_end, kQuadTol);
  return std::pow(x0, k) + q.value;
}

StandardizedLaw standardize(const TailLaw& law) {
  if (!(law.alpha() > 2.0)) throw std::domain_error("infinite variance, not standardizable");
  const double m1 = magnitude_moment(law, 1.0);
  const double m2 = magnitude_moment(law, 2.0);
  const double shift = (2.0 * law.skew() - 1.0) * m1;
  const double var = m2 - shift * shift;
  return StandardizedLaw{law, shift, std::sqrt(var)};
}

double truncated_moment(const TailLaw& law, double beta, double x, TailSide side) {
  if (!(x > law.x0())) throw std::invalid_argument("truncation point must exceed the tail onset x0");
  const double lx = std::log(x);
  const double boundary = std::pow(x, beta) * tail_prob(law, x);
  auto density = [&](double t) { return moment_density(law, beta, t); };
  if (side == TailSide::kBelow) {
    // E M^b 1(M <= x) = x0^b - x^b P(M > x) + int_{x0}^{x} b m^{b-1} P(M > m) dm
    const auto q = adaptive_simpson(density, std::log(law.x0()), lx, kQuadTol);
    return std::pow(law.x0(), beta) - boundary + q.value;
  }
  if (!(beta < law.alpha())) throw std::domain_error("divergent moment");
  // E M^b 1(M > x) = x^b P(M > x) + int_x^inf b m^{b-1} P(M > m) dm
  const double t_end = tail_cutoff(law, beta, lx);
  const auto q = adaptive_simpson(density, lx, t_end, kQuadTol);
  return boundary + q.value;
}

double draw(const EntryLaw& law, const CounterRng& rng, std::uint64_t j) {
  if (std::holds_alternative<GaussianLaw>(law)) return rng.normal(j);
  const auto& sl = std::get<StandardizedLaw>(law);
  const auto [u_mag, u_sign] = rng.uniform_pair(j);
  return sl.transform(sl.base.magnitude_quantile(u_mag), u_sign < sl.base.skew());
}

void fill(const EntryLaw& law, const CounterRng& rng, std::uint64_t first_index, std::span<double> out) {
  if (std::holds_alternative<GaussianLaw>(law)) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rng.normal(first_index + k);
    return;
  }
  const auto& sl = std::get<StandardizedLaw>(law);
  const double q = sl.base.skew();
  if (sl.base.is_constant_sv()) {
    // Closed-form inverse inlined for the hot path.
    const double inv_alpha = 1.0 / sl.base.alpha();
    const double x0 = sl.base.x0();
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto [u_mag, u_sign] = rng.uniform_pair(first_index + k);
      out[k] = sl.transform(x0 * std::pow(u_mag, -inv_alpha), u_sign < q);
    }
    return;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto [u_mag, u_sign] = rng.uniform_pair(first_index + k);
    out[k] = sl.transform(sl.base.magnitude_quantile(u_mag), u_sign < q);
  }
}

std::vector<double> sample(const StandardizedLaw& law, std::uint64_t seed, std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  std::vector<double> out(count);
  fill(EntryLaw{law}, CounterRng(StreamId{seed, 0, 0}), 0, out);
  return out;
}

std::string describe(const EntryLaw& law) {
  if (std::holds_alternative<GaussianLaw>(law)) return "gaussian";
  const auto& b = std::get<StandardizedLaw>(law).base;
  std::ostringstream os;
  os << "heavytail(alpha=" << b.alpha();
  if (const auto* lp = std::get_if<LogPowerSV>(&b.slowly_varying())) {
    os << ", logpower=" << lp->gamma;
  } else {
    os << ", constant=" << std::get<ConstantSV>(b.slowly_varying()).c;
  }
  os << ", x0=" << b.x0() << ", skew=" << b.skew() << ")";
  return os.str();
}

void to_json(nlohmann::json& j, const TailLaw& law) {
  nlohmann::json sv;
  if (const auto* lp = std::get_if<LogPowerSV>(&law.slowly_varying())) {
    sv = {{"kind", "logpower"}, {"param", lp->gamma}};
  } else {
    sv = {{"kind", "constant"}, {"param", std::get<ConstantSV>(law.slowly_varying()).c}};
  }
  j = {{"alpha", law.alpha()}, {"sv", sv}, {"x0", law.x0()}, {"skew", law.skew()}};
}

TailLaw tail_law_from_json(const nlohmann::json& j) {
  const auto& sv = j.at("sv");
  const std::string kind = sv.at("kind").get<std::string>();
  const double param = sv.at("param").get<double>();
  SlowlyVarying l;
  if (kind == "constant") {
    l = ConstantSV{param};
  } else if (kind == "logpower") {
    l = LogPowerSV{param};
  } else {
    throw std::invalid_argument("unknown slowly varying kind: " + kind);
  }
  return TailLaw(j.at("alpha").get<double>(), l, j.at("x0").get<double>(), j.at("skew").get<double>());
}

}  // namespace corrdet
