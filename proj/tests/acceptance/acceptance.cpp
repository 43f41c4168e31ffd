// Acceptance suite. One [PASS]/[FAIL] line per criterion; extra lines start
// with "  info:". Usage: acceptance [--criterion N]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "corrdet/io.hpp"
#include "corrdet/moments.hpp"
#include "corrdet/parallel.hpp"
#include "corrdet/simharness.hpp"
#include "oracles.hpp"

using namespace corrdet;

namespace {

constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
  bool pass = true;
  std::string summary;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void info(const std::string& line) { std::printf("  info: %s\n", line.c_str()); }

SimConfig config(EntryLaw law, long p, long n, long reps, std::uint64_t seed) {
  SimConfig c;
  c.p = p;
  c.n = n;
  c.law = std::move(law);
  c.reps = reps;
  c.seed = seed;
  c.workers = default_workers();
  return c;
}

EntryLaw pareto(double alpha) { return standardize(TailLaw::pareto(alpha)); }

Outcome criterion_1() {
  RngCursor pick(StreamId{kSeed, purpose::kTuples, 1});
  double worst = 0.0;
  long failures = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const long n = 2 + static_cast<long>(pick.uniform() * 299);
    const long p = 1 + static_cast<long>(pick.uniform() * n);
    const EntryLaw law = inst % 2 == 0 ? EntryLaw{GaussianLaw{}} : pareto(3.5);
    const auto x = sample_matrix(law, p, n, StreamId{kSeed, purpose::kData, static_cast<std::uint32_t>(inst)});
    const double a = logdet_cholesky(x).logdet;
    const double b = logdet_perpendiculars(x).logdet;
    const double scaled = std::abs(a - b) / (1.0 + std::abs(b));
    worst = std::max(worst, scaled);
    if (!(scaled <= 1e-8)) ++failures;
  }
  return {failures == 0, fmt("200 instances, max |chol - perp| / (1 + |ld|) = %.3g, failures %ld", worst, failures)};
}

Outcome criterion_2() {
  const long p = 50, n = 200, reps = 5000, i = p / 2;
  auto c = config(GaussianLaw{}, p, n, reps, kSeed);
  c.track_delta = i;
  const auto matrix = run_clt_experiment(c);
  const auto beta = gaussian_beta_oracle(p, n, reps, kSeed + 1, c.workers);
  const auto ks = ks_two_sample(matrix.logdet, beta);
  const auto m = sample_moments(matrix.tracked_delta);
  const double se = std::sqrt(m.var / reps);
  const double target = static_cast<double>(n - i) / n;
  const bool mean_ok = std::abs(m.mean - target) <= 3.0 * se;
  return {ks.d <= 0.04 && mean_ok,
          fmt("two-sample KS %.4f (<= 0.04); Delta^2 mean at i=%ld %.5f vs %.5f, %.2f SE", ks.d, i, m.mean, target,
              std::abs(m.mean - target) / se)};
}

Outcome criterion_3() {
  const long p = 300, n = 1000, reps = 2000;
  bool pass = true;
  std::string summary;
  const double ell_alt = std::log1p(-static_cast<double>(p) / n);
  for (int which = 0; which < 2; ++which) {
    const EntryLaw law = which == 0 ? EntryLaw{GaussianLaw{}} : pareto(3.5);
    const auto res = run_clt_experiment(config(law, p, n, reps, kSeed + 3 + which));
    const bool ok = res.ks <= 0.06 && std::abs(res.mean) <= 0.1 && std::abs(res.var - 1.0) <= 0.15;
    pass = pass && ok;
    summary += fmt("%s KS %.4f mean %.4f var %.4f%s", which == 0 ? "gaussian" : "pareto(3.5)", res.ks, res.mean,
                   res.var, which == 0 ? "; " : "");
    // Same samples centred with log(1 - p/n) in place of log(1 - (p-1)/n).
    const double mu_alt = (p - n + 0.5) * ell_alt - p + static_cast<double>(p) / n;
    const double sigma_alt = std::sqrt(-2.0 * ell_alt - 2.0 * static_cast<double>(p) / n);
    std::vector<double> z_alt;
    for (double ld : res.logdet) z_alt.push_back((ld - mu_alt) / sigma_alt);
    const auto m = sample_moments(z_alt);
    info(fmt("%s with log(1-p/n) centring: KS %.4f mean %.4f var %.4f", which == 0 ? "gaussian" : "pareto(3.5)",
             ks_distance_normal(z_alt), m.mean, m.var));
  }
  return {pass, summary + " (KS <= 0.06, |mean| <= 0.1, |var-1| <= 0.15)"};
}

Outcome criterion_4() {
  const auto sq = run_clt_experiment(config(GaussianLaw{}, 400, 400, 2000, kSeed + 5));
  auto c = config(GaussianLaw{}, 397, 400, 2000, kSeed + 6);
  c.regime = RegimeKind::kNearSingular;
  const auto near = run_clt_experiment(c);
  info(fmt("square mean %.4f var %.4f; near-singular mean %.4f var %.4f", sq.mean, sq.var, near.mean, near.var));
  return {sq.ks <= 0.08 && near.ks <= 0.10,
          fmt("p=n=400 KS %.4f (<= 0.08); p=397 KS %.4f (<= 0.10)", sq.ks, near.ks)};
}

Outcome criterion_5() {
  RngCursor pick(StreamId{kSeed, purpose::kTuples, 5});
  long violations = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const long n = 4 + static_cast<long>(pick.uniform() * 117);
    const long choices[] = {0, 1, n / 4, n / 2, n - 2};
    const long i = choices[inst % 5];
    const EntryLaw law = inst % 2 == 0 ? EntryLaw{GaussianLaw{}} : pareto(3.5);
    for (const auto& r : bounds_experiment(law, n, i, 1, kSeed + inst)) violations += r.all_ok() ? 0 : 1;
  }
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const long n = 5 + inst % 36;
    const long i = (inst * 7) % (n - 1);
    const auto x = sample_matrix(pareto(3.5), std::max<long>(i, 1), n,
                                 StreamId{kSeed, purpose::kData, static_cast<std::uint32_t>(500 + inst)});
    const auto q = projection_matrix(x, i);
    const auto fast = q_bound_sums(q);
    const auto slow = oracle::naive_q_sums(q.q);
    for (std::size_t k = 0; k < kQBoundCount; ++k) {
      worst = std::max(worst, std::abs(fast[k] - slow[k]) / std::max(1.0, std::abs(slow[k])));
    }
  }
  return {violations == 0 && worst <= 1e-10,
          fmt("bound violations %ld of 100; factorized vs naive max rel diff %.3g (<= 1e-10)", violations, worst)};
}

Outcome criterion_6() {
  const long n = 2000;
  const double eps = std::pow(static_cast<double>(n), -0.25);
  bool pass = true;
  std::string summary;
  for (long p : {1000L, 1800L}) {
    const auto res = resolvent_experiment(config(GaussianLaw{}, p, n, 50, kSeed + 7 + p),
                                          {eps, std::pow(static_cast<double>(n), -0.1),
                                           std::pow(static_cast<double>(n), -5.0 / 12.0)});
    double err = 0.0;
    for (const auto& row : res.rows) {
      if (row.epsilon == eps) err = row.rel_error;
    }
    pass = pass && err <= 0.05 && res.monotone;
    summary += fmt("p/n=%.1f rel err %.4f monotone %s; ", static_cast<double>(p) / n, err, res.monotone ? "yes" : "no");
  }
  return {pass, summary + "(rel err <= 0.05)"};
}

Outcome criterion_7() {
  const long n = 4000;
  const auto law = standardize(TailLaw::pareto(3.0));
  const MomentIndex four({4});
  const auto est = estimate_mixed_moment(law, n, four, 1000000, kSeed + 8, default_workers());
  const double scale = moment_rate_scaling(law, n, four);
  const double scaled = est.value * scale;
  const double limit = 3.0 * std::numbers::pi / 4.0;
  const bool heavy_ok = std::abs(scaled / limit - 1.0) <= 0.15;
  info(fmt("heavy-tailed E Y^4 = %.6g +- %.2g, scaled %.4f +- %.4f", est.value, est.se, scaled, est.se * scale));

  const long ng = 50;
  const auto g = estimate_mixed_moment(GaussianLaw{}, ng, four, 100000, kSeed + 9, default_workers());
  const double exact = 3.0 / (ng * (ng + 2.0));
  const bool gauss_ok = std::abs(g.value - exact) <= 3.0 * g.se;
  return {heavy_ok && gauss_ok,
          fmt("scaled 4th moment %.4f vs 3pi/4 = %.4f (ratio %.4f, within 15%%); gaussian %.6g vs %.6g (%.2f SE)",
              scaled, limit, scaled / limit, g.value, exact, std::abs(g.value - exact) / g.se)};
}

Outcome criterion_8() {
  const double x = 1e3;
  struct Case {
    double alpha, beta;
    TailSide side;
  };
  bool pass = true;
  std::string summary;
  for (const Case& c : {Case{3.0, 2.0, TailSide::kAbove}, Case{3.5, 2.0, TailSide::kAbove},
                        Case{3.5, 4.0, TailSide::kBelow}}) {
    const auto law = TailLaw::pareto(c.alpha);
    const double coef = c.alpha / std::abs(c.alpha - c.beta);
    const double asym = coef * std::pow(x, c.beta) * tail_prob(law, x);
    const double ratio = truncated_moment(law, c.beta, x, c.side) / asym;
    pass = pass && ratio >= 0.9 && ratio <= 1.1;
    summary += fmt("(%.1f,%.0f,%s) %.4f ", c.alpha, c.beta, c.side == TailSide::kAbove ? "above" : "below", ratio);
  }
  return {pass, summary + "(ratios in [0.9, 1.1])"};
}

Outcome criterion_9() {
  TruncationSettings s;
  s.force_global = true;
  s.c_alpha = 1.0 / 3.0;
  const auto res = truncation_experiment(config(pareto(3.5), 500, 500, 1000, kSeed + 10), s);
  info(fmt("replications changed %ld, entries changed %ld, max |dz| %.3g", res.reps_changed, res.entries_changed,
           res.max_abs_diff));
  return {res.paired_ks.d <= 0.02 && res.event_rate >= 0.99,
          fmt("paired KS %.4f (<= 0.02); event rate %.4f (>= 0.99)", res.paired_ks.d, res.event_rate)};
}

Outcome criterion_10() {
  const long p = 200, n = 500;
  const auto null = run_clt_experiment(config(GaussianLaw{}, p, n, 2000, kSeed + 11));
  long rejected = 0;
  for (double z : null.z) rejected += independence_decision(z, 0.05, null.consts).reject ? 1 : 0;
  const double size = static_cast<double>(rejected) / null.z.size();

  const long power_reps = 1000;
  std::vector<int> hit(power_reps, 0);
  parallel_for(power_reps, default_workers(), [&](std::size_t r) {
    const auto x = equicorrelated_gaussian(p, n, 0.1, StreamId{kSeed + 12, purpose::kData, static_cast<std::uint32_t>(r)});
    hit[r] = independence_test(x, 0.05).reject ? 1 : 0;
  });
  double power = 0.0;
  for (int h : hit) power += h;
  power /= power_reps;
  return {size >= 0.03 && size <= 0.07 && power >= 0.9,
          fmt("size %.4f (in [0.03, 0.07]); power at rho=0.1 %.4f (>= 0.9)", size, power)};
}

bool run_cli(const std::string& args) {
  const std::string cmd = std::string(CORRDET_CLI_PATH) + " " + args + " > /dev/null";
  return std::system(cmd.c_str()) == 0;
}

Outcome criterion_11() {
  auto c = config(pareto(3.5), 60, 150, 200, kSeed + 13);
  std::vector<std::vector<double>> runs;
  for (unsigned w : {1u, 2u, 8u}) {
    c.workers = w;
    runs.push_back(run_clt_experiment(c).z);
  }
  const bool lib_ok = runs[0] == runs[1] && runs[0] == runs[2];

  const auto dir = std::filesystem::temp_directory_path();
  std::vector<std::vector<double>> cli;
  bool cli_ran = true;
  for (int w : {1, 3, 8}) {
    const auto path = (dir / ("corrdet_accept_w" + std::to_string(w) + ".csv")).string();
    cli_ran = cli_ran && run_cli(fmt("simulate --p 40 --n 90 --alpha 3.5 --reps 120 --seed 77 --workers %d "
                                     "--format csv --out %s",
                                     w, path.c_str()));
    if (cli_ran) cli.push_back(import_z(path));
  }
  const bool cli_ok = cli_ran && cli.size() == 3 && cli[0] == cli[1] && cli[0] == cli[2];
  return {lib_ok && cli_ok, fmt("library workers 1/2/8 identical: %s; CLI simulate workers 1/3/8 identical: %s",
                                lib_ok ? "yes" : "no", cli_ok ? "yes" : "no")};
}

const std::vector<std::function<Outcome()>> kCriteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10, criterion_11};

bool run(int k) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = kCriteria[static_cast<std::size_t>(k - 1)]();
  } catch (const std::exception& e) {
    out = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %d: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", k, out.summary.c_str(), secs);
  std::fflush(stdout);
  return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--criterion" && a + 1 < argc) {
      which.push_back(std::atoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
      return 1;
    }
  }
  if (which.empty()) {
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) which.push_back(k);
  }
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 1;
    }
    all = run(k) && all;
  }
  return all ? 0 : 1;
}
