#include "corrdet/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "corrdet/parallel.hpp"
#include "corrdet/special.hpp"

namespace corrdet {

namespace {

constexpr int kMaxAttempts = 2;

std::uint32_t rep_index(std::size_t r) {
  if (r > UINT32_MAX) throw std::invalid_argument("replication index exceeds 2^32");
  return static_cast<std::uint32_t>(r);
}

StreamId data_stream(std::uint64_t seed, std::size_t rep, int attempt) {
  return StreamId{seed, purpose::kData + static_cast<std::uint32_t>(attempt) * purpose::kAttemptStride,
                  rep_index(rep)};
}

double law_alpha(const EntryLaw& law) {
  if (const auto* s = std::get_if<StandardizedLaw>(&law)) return s->base.alpha();
  throw std::invalid_argument("a heavy-tailed law is required for this experiment");
}

}  // namespace

void SimConfig::validate() const {
  if (p < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
  if (p > n) throw std::invalid_argument("theory requires p <= n");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("w must lie in (0, 1)");
  if (track_delta && (*track_delta < 0 || *track_delta >= p)) {
    throw std::invalid_argument("tracked perpendicular index out of range");
  }
  if (track_delta && method != LogDetMethod::kPerpendiculars) {
    throw std::invalid_argument("tracking a perpendicular requires the perpendiculars method");
  }
}

DataMatrix sample_matrix(const EntryLaw& law, long p, long n, StreamId stream) {
  DataMatrix x(p, n);
  const CounterRng rng(stream);
  for (long i = 0; i < p; ++i) {
    fill(law, rng, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n), x.row(i));
  }
  return x;
}

DataMatrix equicorrelated_gaussian(long p, long n, double rho, StreamId stream) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
  DataMatrix x = sample_matrix(GaussianLaw{}, p, n, stream);
  StreamId common = stream;
  common.purpose += purpose::kCommonFactor;
  const CounterRng rng(common);
  const double a = std::sqrt(1.0 - rho);
  const double b = std::sqrt(rho);
  for (long j = 0; j < n; ++j) {
    const double h = rng.normal(static_cast<std::uint64_t>(j));
    for (long i = 0; i < p; ++i) x(i, j) = a * x(i, j) + b * h;
  }
  return x;
}

CLTConstants constants_for(const SimConfig& config) {
  const Regime regime = config.regime ? make_regime(*config.regime, config.p, config.n, config.w)
                                      : select_regime(config.p, config.n, config.w);
  return clt_constants(config.p, config.n, regime);
}

SimResult run_clt_experiment(const SimConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  SimResult res;
  res.config = config;
  res.consts = constants_for(config);
  const auto reps = static_cast<std::size_t>(config.reps);
  res.z.assign(reps, 0.0);
  res.logdet.assign(reps, 0.0);
  if (config.track_delta) res.tracked_delta.assign(reps, 0.0);
  std::atomic<long> retried{0};

  parallel_for(reps, config.workers, [&](std::size_t r) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const DataMatrix x = sample_matrix(config.law, config.p, config.n, data_stream(config.seed, r, attempt));
      try {
        const LogDetResult ld = logdet(x, config.method);
        res.logdet[r] = ld.logdet;
        res.z[r] = standardize_logdet(ld.logdet, res.consts);
        if (config.track_delta) res.tracked_delta[r] = ld.deltas->at(static_cast<std::size_t>(*config.track_delta));
        return;
      } catch (const NumericError&) {
        if (attempt + 1 == kMaxAttempts) throw;
        ++retried;
      }
    }
  });

  res.retried = retried.load();
  const auto m = sample_moments(res.z);
  res.mean = m.mean;
  res.var = m.var;
  res.ks = ks_distance_normal(res.z);
  res.ks_pvalue = kolmogorov_pvalue(std::sqrt(static_cast<double>(reps)) * res.ks);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<double> gaussian_beta_oracle(long p, long n, long reps, std::uint64_t seed, unsigned workers) {
  if (p < 1 || n < p) throw std::invalid_argument("theory requires 1 <= p <= n");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(reps), 0.0);
  parallel_for(out.size(), workers, [&](std::size_t r) {
    RngCursor cursor(StreamId{seed, purpose::kOracle, rep_index(r)});
    double sum = 0.0;
    for (long i = 1; i < p; ++i) {
      const double g1 = sample_gamma(cursor, 0.5 * static_cast<double>(n - i));
      const double g2 = sample_gamma(cursor, 0.5 * static_cast<double>(i));
      sum += std::log(g1) - std::log(g1 + g2);
    }
    out[r] = sum;
  });
  return out;
}

std::vector<double> gaussian_beta_marginal(long n, long i, long reps, std::uint64_t seed) {
  if (i < 0 || i >= n) throw std::invalid_argument("marginal index must satisfy 0 <= i < n");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(reps), 1.0);
  if (i == 0) return out;
  RngCursor cursor(StreamId{seed, purpose::kOracleMarginal, 0});
  for (auto& v : out) {
    const double g1 = sample_gamma(cursor, 0.5 * static_cast<double>(n - i));
    const double g2 = sample_gamma(cursor, 0.5 * static_cast<double>(i));
    v = g1 / (g1 + g2);
  }
  return out;
}

ReplacementResult replacement_experiment(const SimConfig& config, std::optional<long> s1_override) {
  config.validate();
  ReplacementResult res;
  res.s1 = s1_override ? *s1_override : config.p / 100;
  if (res.s1 < 0 || res.s1 > config.p) throw std::invalid_argument("s1 must lie in [0, p]");
  res.consts = constants_for(config);
  if (res.s1 == 0) {
    res.skipped = true;
    res.warning = "replacement block empty";
    return res;
  }
  const long prefix = config.p - res.s1;
  const auto n = static_cast<std::uint64_t>(config.n);
  res.pairs.assign(static_cast<std::size_t>(config.reps), ReplacedPair{});

  parallel_for(res.pairs.size(), config.workers, [&](std::size_t r) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const DataMatrix x = sample_matrix(config.law, config.p, config.n, data_stream(config.seed, r, attempt));
      const CounterRng gauss(StreamId{
          config.seed, purpose::kReplacement + static_cast<std::uint32_t>(attempt) * purpose::kAttemptStride,
          rep_index(r)});
      try {
        PerpendicularsAccumulator base(config.n, config.p, false);
        for (long i = 0; i < prefix; ++i) base.add_row(x.row(i));
        PerpendicularsAccumulator replaced = base;
        std::vector<double> row(static_cast<std::size_t>(config.n));
        for (long i = prefix; i < config.p; ++i) {
          base.add_row(x.row(i));
          fill(GaussianLaw{}, gauss, static_cast<std::uint64_t>(i - prefix) * n, row);
          replaced.add_row(row);
        }
        auto& pair = res.pairs[r];
        pair.logdet_R = base.result().logdet;
        pair.logdet_R_check = replaced.result().logdet;
        pair.sigma_scaled_diff = std::abs(pair.logdet_R_check - pair.logdet_R) / res.consts.sigma;
        return;
      } catch (const NumericError&) {
        if (attempt + 1 == kMaxAttempts) throw;
      }
    }
  });

  std::vector<double> diffs;
  diffs.reserve(res.pairs.size());
  for (const auto& pr : res.pairs) diffs.push_back(pr.sigma_scaled_diff);
  const auto sorted = sorted_copy(diffs);
  res.median = quantile(sorted, 0.5);
  res.q90 = quantile(sorted, 0.9);
  res.max = sorted.back();
  return res;
}

IndependenceResult independence_decision(double z, double level, const CLTConstants& consts) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  IndependenceResult res;
  res.consts = consts;
  res.z = z;
  res.logdet = consts.mu + consts.sigma * z;
  res.pvalue = std::erfc(std::abs(z) / std::sqrt(2.0));
  res.reject = res.pvalue < level;
  return res;
}

IndependenceResult independence_test(const DataMatrix& data, double level, double w,
                                     std::optional<RegimeKind> regime) {
  const long p = data.p();
  const long n = data.n();
  const Regime reg = regime ? make_regime(*regime, p, n, w) : select_regime(p, n, w);
  const CLTConstants consts = clt_constants(p, n, reg);
  const double ld = logdet_perpendiculars(data).logdet;
  auto res = independence_decision(standardize_logdet(ld, consts), level, consts);
  res.logdet = ld;
  return res;
}

TruncationExperimentResult truncation_experiment(const SimConfig& config, const TruncationSettings& settings) {
  config.validate();
  const double alpha = law_alpha(config.law);
  TruncationExperimentResult res;
  res.plan = plan_truncation(config.p, config.n, settings.a, settings.c_frak, settings.force_global);
  res.c_alpha = settings.c_alpha;
  res.eps_alpha = settings.eps_alpha;
  const CLTConstants consts = constants_for(config);
  const auto reps = static_cast<std::size_t>(config.reps);
  res.z_plain.assign(reps, 0.0);
  res.z_truncated.assign(reps, 0.0);
  std::vector<long> changed(reps, 0);
  std::vector<char> event(reps, 0);

  parallel_for(reps, config.workers, [&](std::size_t r) {
    const DataMatrix x = sample_matrix(config.law, config.p, config.n, data_stream(config.seed, r, 0));
    const double ld = logdet(x, config.method).logdet;
    res.z_plain[r] = standardize_logdet(ld, consts);
    const auto trunc = apply_truncation(x, res.plan);
    changed[r] = trunc.changed;
    res.z_truncated[r] =
        trunc.changed == 0 ? res.z_plain[r] : standardize_logdet(logdet(trunc.truncated, config.method).logdet, consts);
    event[r] = exceedance_profile(x, settings.c_alpha, settings.eps_alpha, alpha).event_holds() ? 1 : 0;
  });

  const double cells = static_cast<double>(config.p) * static_cast<double>(config.n);
  res.changed_fraction.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    res.changed_fraction[r] = static_cast<double>(changed[r]) / cells;
    res.entries_changed += changed[r];
    res.reps_changed += changed[r] > 0 ? 1 : 0;
    res.max_abs_diff = std::max(res.max_abs_diff, std::abs(res.z_plain[r] - res.z_truncated[r]));
  }
  res.event_rate = static_cast<double>(std::count(event.begin(), event.end(), 1)) / static_cast<double>(reps);
  res.paired_ks = ks_two_sample(res.z_plain, res.z_truncated);
  return res;
}

ResolventResult resolvent_experiment(const SimConfig& config, std::vector<double> eps_grid) {
  config.validate();
  if (eps_grid.empty()) throw std::invalid_argument("empty regularizer grid");
  std::sort(eps_grid.begin(), eps_grid.end());
  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<std::vector<double>> traces(reps);
  std::vector<char> monotone(reps, 1);

  parallel_for(reps, config.workers, [&](std::size_t r) {
    const DataMatrix x = sample_matrix(config.law, config.p, config.n, data_stream(config.seed, r, 0));
    const GramSpectrum spectrum(x);
    auto& t = traces[r];
    for (double eps : eps_grid) t.push_back(spectrum.trace_mean(eps));
    for (std::size_t k = 1; k < t.size(); ++k) {
      if (t[k] > t[k - 1]) monotone[r] = 0;
    }
  });

  ResolventResult res;
  res.monotone = std::all_of(monotone.begin(), monotone.end(), [](char c) { return c == 1; });
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    std::vector<double> col(reps);
    for (std::size_t r = 0; r < reps; ++r) col[r] = traces[r][k];
    ResolventRow row;
    row.epsilon = eps_grid[k];
    row.empirical = pairwise_sum(col) / static_cast<double>(reps);
    row.formula = stieltjes_formula(config.p, config.n, row.epsilon);
    row.rel_error = std::abs(row.empirical - row.formula) / row.formula;
    res.rows.push_back(row);
  }
  return res;
}

std::vector<QBoundsReport> bounds_experiment(const EntryLaw& law, long n, long i, long instances,
                                             std::uint64_t seed) {
  if (instances < 1) throw std::invalid_argument("instances must be at least 1");
  if (i < 0 || i >= n) throw std::invalid_argument("projection index must satisfy 0 <= i < n");
  std::vector<QBoundsReport> out;
  out.reserve(static_cast<std::size_t>(instances));
  for (long k = 0; k < instances; ++k) {
    const DataMatrix x = sample_matrix(law, std::max(i, 1L), n, data_stream(seed, static_cast<std::size_t>(k), 0));
    out.push_back(verify_q_bounds(projection_matrix(x, i)));
  }
  return out;
}

void to_json(nlohmann::json& j, const SimConfig& c) {
  j = {{"p", c.p},
       {"n", c.n},
       {"law", describe(c.law)},
       {"reps", c.reps},
       {"seed", c.seed},
       {"regime", c.regime ? to_string(*c.regime) : std::string("auto")},
       {"w", c.w},
       {"method", c.method == LogDetMethod::kCholesky ? "cholesky" : "perpendiculars"},
       {"workers", c.workers}};
  if (const auto* s = std::get_if<StandardizedLaw>(&c.law)) {
    j["tail_law"] = s->base;
    j["shift"] = s->shift;
    j["scale"] = s->scale;
  }
}

}  // namespace corrdet
