// Command-line front end: simulation, oracle comparison and diagnostics.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corrdet/io.hpp"
#include "corrdet/moments.hpp"
#include "corrdet/parallel.hpp"
#include "corrdet/simharness.hpp"
#include "json.hpp"

using namespace corrdet;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitStatFail = 2;

struct LawOptions {
  double alpha = 0.0;
  bool gaussian = false;
  std::string sv = "constant:1";
  double x0 = 1.0;
  double skew = 0.5;

  void attach(CLI::App* cmd) {
    auto* a = cmd->add_option("--alpha", alpha, "tail index of the heavy-tailed law");
    auto* g = cmd->add_flag("--gaussian", gaussian, "standard Gaussian entries");
    a->excludes(g);
    cmd->add_option("--sv", sv, "slowly varying factor: constant:c or logpower:g")->capture_default_str();
    cmd->add_option("--x0", x0, "lower end of the magnitude support")->capture_default_str();
    cmd->add_option("--skew", skew, "probability of a positive sign")->capture_default_str();
  }

  TailLaw tail() const {
    const auto colon = sv.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--sv expects kind:param");
    const std::string kind = sv.substr(0, colon);
    const double param = std::stod(sv.substr(colon + 1));
    if (kind == "constant") return TailLaw(alpha, ConstantSV{param}, x0, skew);
    if (kind == "logpower") return TailLaw(alpha, LogPowerSV{param}, x0, skew);
    throw std::invalid_argument("unknown slowly varying kind: " + kind);
  }

  EntryLaw law() const {
    if (gaussian) return GaussianLaw{};
    if (alpha == 0.0) throw std::invalid_argument("give --alpha or --gaussian");
    return standardize(tail());
  }
};

struct RunOptions {
  long p = 0;
  long n = 0;
  long reps = 1000;
  std::uint64_t seed = 0;
  std::string regime = "auto";
  double w = kDefaultW;
  std::string method = "perpendiculars";
  unsigned workers = 1;

  void attach(CLI::App* cmd, bool with_normalization = true) {
    cmd->add_option("--p", p, "number of rows")->required();
    cmd->add_option("--n", n, "row length")->required();
    cmd->add_option("--reps", reps, "replications")->capture_default_str();
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd->add_option("--workers", workers, "worker threads (0 = all cores)")->capture_default_str();
    if (!with_normalization) return;
    cmd->add_option("--regime", regime, "auto, general, near or square")->capture_default_str();
    cmd->add_option("--w", w, "near-singular threshold exponent")->capture_default_str();
    cmd->add_option("--method", method, "perpendiculars or cholesky")->capture_default_str();
  }

  SimConfig config(const EntryLaw& law) const {
    SimConfig c;
    c.p = p;
    c.n = n;
    c.law = law;
    c.reps = reps;
    c.seed = seed;
    if (regime != "auto") c.regime = regime_kind_from_string(regime);
    c.w = w;
    if (method == "cholesky") {
      c.method = LogDetMethod::kCholesky;
    } else if (method != "perpendiculars") {
      throw std::invalid_argument("unknown method: " + method);
    }
    c.workers = workers == 0 ? default_workers() : workers;
    return c;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-determinant of sample correlation matrices: simulation and diagnostics"};
  app.require_subcommand(1);

  LawOptions law;
  RunOptions run;
  std::string out_path;
  std::string format = "json";
  double max_ks = -1.0;
  auto* simulate = app.add_subcommand("simulate", "replicate the standardized log-determinant");
  run.attach(simulate);
  law.attach(simulate);
  simulate->add_option("--out", out_path, "result file");
  simulate->add_option("--format", format, "json or csv")->capture_default_str();
  simulate->add_option("--max-ks", max_ks, "exit with status 2 when KS to Phi exceeds this");

  double tol = 0.04;
  auto* oracle = app.add_subcommand("oracle-compare", "matrix pipeline against the Beta-product oracle (Gaussian)");
  run.attach(oracle, false);
  oracle->add_option("--tol", tol, "largest accepted two-sample KS distance")->capture_default_str();
  oracle->add_option("--out", out_path, "JSON report file");

  long s1 = -1;
  auto* replace = app.add_subcommand("replace-exp", "replace the last s1 rows by Gaussian rows");
  run.attach(replace);
  law.attach(replace);
  replace->add_option("--s1", s1, "rows to replace (default floor(p/100))");

  std::string input;
  bool header = false;
  double level = 0.05;
  auto* test = app.add_subcommand("test", "test of complete independence on a data file");
  test->add_option("--input", input, "CSV file, one data row per line")->required();
  test->add_flag("--header", header, "skip the first line");
  test->add_option("--level", level, "significance level")->capture_default_str();
  test->add_option("--w", run.w, "near-singular threshold exponent")->capture_default_str();
  test->add_option("--regime", run.regime, "auto, general, near or square")->capture_default_str();

  long bn = 0;
  long bi = 0;
  long instances = 10;
  auto* bounds = app.add_subcommand("verify-bounds", "deterministic bounds on the normalized projection");
  bounds->add_option("--n", bn, "row length")->required();
  bounds->add_option("--i", bi, "number of leading rows projected out")->required();
  bounds->add_option("--instances", instances, "random matrices")->capture_default_str();
  bounds->add_option("--seed", run.seed, "master seed")->capture_default_str();
  law.attach(bounds);

  std::string eps_grid;
  double rtol = 0.05;
  auto* resolvent = app.add_subcommand("resolvent-check", "trace of the regularized inverse against its limit");
  run.attach(resolvent, false);
  law.attach(resolvent);
  resolvent->add_option("--eps-grid", eps_grid, "comma-separated regularizers (default n^-1/10, n^-1/4, n^-5/12)");
  resolvent->add_option("--tol", rtol, "largest accepted relative error")->capture_default_str();

  std::string index = "4";
  long mn = 0;
  double mtol = 0.15;
  auto* moments = app.add_subcommand("moments-check", "mixed moments of self-normalized entries");
  moments->add_option("--n", mn, "row length")->required();
  moments->add_option("--index", index, "exponents, e.g. 2,2")->capture_default_str();
  moments->add_option("--reps", run.reps, "rows")->capture_default_str();
  moments->add_option("--seed", run.seed, "master seed")->capture_default_str();
  moments->add_option("--workers", run.workers, "worker threads (0 = all cores)")->capture_default_str();
  moments->add_option("--tol", mtol, "largest accepted relative deviation of the ratio")->capture_default_str();
  law.attach(moments);

  TruncationSettings ts;
  auto* truncate = app.add_subcommand("truncate-stats", "truncation plan, neutrality and exceedance counts");
  run.attach(truncate);
  law.attach(truncate);
  truncate->add_option("--a", ts.a, "parameter a > 2")->capture_default_str();
  truncate->add_option("--c-frak", ts.c_frak, "parameter c in (0, 1/4)")->capture_default_str();
  truncate->add_flag("--force-global", ts.force_global, "use the global level on every row");
  truncate->add_option("--c-alpha", ts.c_alpha, "exceedance level exponent")->capture_default_str();
  truncate->add_option("--eps-alpha", ts.eps_alpha, "exceedance slack exponent")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*simulate) {
      const auto res = run_clt_experiment(run.config(law.law()));
      if (!out_path.empty()) {
        export_results(res, out_path, format == "csv" ? ExportFormat::kCsv : ExportFormat::kJson);
      }
      auto summary = result_to_json(res);
      summary.erase("z");
      emit(summary);
      return (max_ks >= 0.0 && res.ks > max_ks) ? kExitStatFail : kExitOk;
    }
    if (*oracle) {
      auto cfg = run.config(GaussianLaw{});
      const auto matrix = run_clt_experiment(cfg);
      const auto beta = gaussian_beta_oracle(cfg.p, cfg.n, cfg.reps, cfg.seed, cfg.workers);
      const auto ks = ks_two_sample(matrix.logdet, beta);
      json j = {{"p", cfg.p}, {"n", cfg.n}, {"reps", cfg.reps}, {"seed", cfg.seed},
                {"ks", ks.d}, {"pvalue", ks.pvalue}, {"tol", tol}, {"pass", ks.d <= tol}};
      if (!out_path.empty()) {
        j["matrix_logdet"] = matrix.logdet;
        j["oracle_logdet"] = beta;
        std::ofstream(out_path) << j.dump(2) << '\n';
        j.erase("matrix_logdet");
        j.erase("oracle_logdet");
      }
      emit(j);
      return ks.d <= tol ? kExitOk : kExitStatFail;
    }
    if (*replace) {
      const auto res = replacement_experiment(run.config(law.law()),
                                              s1 >= 0 ? std::optional<long>(s1) : std::nullopt);
      if (res.skipped) {
        std::cerr << "warning: " << res.warning << " (s1 = 0); experiment skipped\n";
        emit({{"s1", 0}, {"skipped", true}});
        return kExitOk;
      }
      emit({{"s1", res.s1}, {"skipped", false}, {"consts", res.consts}, {"median", res.median},
            {"q90", res.q90}, {"max", res.max}});
      return kExitOk;
    }
    if (*test) {
      const auto data = read_data_csv(input, header);
      std::optional<RegimeKind> regime;
      if (run.regime != "auto") regime = regime_kind_from_string(run.regime);
      const auto res = independence_test(data, level, run.w, regime);
      json j = {{"p", data.p()}, {"n", data.n()}, {"logdet", res.logdet}, {"z", res.z}, {"pvalue", res.pvalue},
                {"reject", res.reject}, {"level", level}, {"consts", res.consts}};
      // Both normalizations apply in the overlap zone; report both.
      if (data.p() < data.n() && res.consts.regime.kind == RegimeKind::kNearSingular) {
        try {
          const auto general = clt_constants(data.p(), data.n(), Regime{RegimeKind::kGeneral, run.w, res.consts.regime.threshold});
          j["z_general"] = standardize_logdet(res.logdet, general);
        } catch (const std::domain_error&) {
        }
        j["z_near_singular"] = res.z;
      }
      emit(j);
      return kExitOk;
    }
    if (*bounds) {
      const auto reports = bounds_experiment(law.gaussian || law.alpha == 0.0 ? EntryLaw{GaussianLaw{}} : law.law(),
                                             bn, bi, instances, run.seed);
      json arr = json::array();
      bool ok = true;
      for (const auto& r : reports) {
        arr.push_back(r);
        ok = ok && r.all_ok();
      }
      emit({{"n", bn}, {"i", bi}, {"instances", instances}, {"all_ok", ok}, {"reports", arr}});
      return ok ? kExitOk : kExitStatFail;
    }
    if (*resolvent) {
      auto cfg = run.config(law.gaussian || law.alpha == 0.0 ? EntryLaw{GaussianLaw{}} : law.law());
      const double dn = static_cast<double>(cfg.n);
      const auto grid = eps_grid.empty()
                            ? std::vector<double>{std::pow(dn, -0.1), std::pow(dn, -0.25), std::pow(dn, -5.0 / 12.0)}
                            : parse_list(eps_grid);
      const auto res = resolvent_experiment(cfg, grid);
      json rows = json::array();
      bool ok = res.monotone;
      for (const auto& r : res.rows) {
        rows.push_back({{"epsilon", r.epsilon}, {"empirical", r.empirical}, {"formula", r.formula},
                        {"rel_error", r.rel_error}});
        ok = ok && r.rel_error <= rtol;
      }
      emit({{"p", cfg.p}, {"n", cfg.n}, {"reps", cfg.reps}, {"monotone", res.monotone}, {"rows", rows}, {"pass", ok}});
      return ok ? kExitOk : kExitStatFail;
    }
    if (*moments) {
      const auto idx = MomentIndex::parse(index);
      const EntryLaw entry = law.law();
      const unsigned workers = run.workers == 0 ? default_workers() : run.workers;
      const auto est = estimate_mixed_moment(entry, mn, idx, run.reps, run.seed, workers);
      json j = {{"law", est.law}, {"n", mn}, {"index", idx.to_string()}, {"reps", run.reps},
                {"estimate", est.value}, {"se", est.se}};
      double ratio = 0.0;
      if (std::holds_alternative<GaussianLaw>(entry)) {
        const double exact = gaussian_moment_exact(mn, idx);
        j["scaled"] = est.value;
        j["theoretical_limit"] = exact;
        ratio = exact != 0.0 ? est.value / exact : 0.0;
        j["ratio"] = ratio;
        const bool ok = std::abs(est.value - exact) <= 3.0 * est.se;
        j["pass"] = ok;
        emit(j);
        return ok ? kExitOk : kExitStatFail;
      }
      const auto& sl = std::get<StandardizedLaw>(entry);
      const double scaled = est.value * moment_rate_scaling(sl, mn, idx);
      const double limit = moment_rate_limit(sl.base.alpha(), idx);
      ratio = scaled / limit;
      const bool ok = std::abs(ratio - 1.0) <= mtol;
      j["scaled"] = scaled;
      j["theoretical_limit"] = limit;
      j["ratio"] = ratio;
      j["pass"] = ok;
      emit(j);
      return ok ? kExitOk : kExitStatFail;
    }
    if (*truncate) {
      const auto res = truncation_experiment(run.config(law.law()), ts);
      const auto frac = sorted_copy(res.changed_fraction);
      json dist = {{"mean", pairwise_sum(frac) / static_cast<double>(frac.size())},
                   {"median", quantile(frac, 0.5)},
                   {"q90", quantile(frac, 0.9)},
                   {"max", frac.back()}};
      emit({{"plan", res.plan}, {"changed_fraction_distribution", dist}, {"reps_changed", res.reps_changed},
            {"entries_changed", res.entries_changed}, {"paired_ks", res.paired_ks.d},
            {"max_abs_diff", res.max_abs_diff}, {"bn_flag_rate", res.event_rate}, {"c_alpha", res.c_alpha},
            {"eps_alpha", res.eps_alpha}});
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
