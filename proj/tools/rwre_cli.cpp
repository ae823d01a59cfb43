// Command-line front end: experiment configuration, seeded parallel
// execution, and CSV/JSON export for the library modules.
//
// Exit codes: 0 success, 2 config error, 3 regime/precondition error,
// 4 budget or resource exhaustion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rwre/config.hpp"
#include "rwre/envmodel.hpp"
#include "rwre/hittime.hpp"
#include "rwre/io.hpp"
#include "rwre/parallel.hpp"
#include "rwre/speedlab.hpp"
#include "rwre/stationary.hpp"
#include "rwre/walker.hpp"

namespace {

constexpr const char* kToolVersion = "rwre 0.1.0";

struct RunContext {
  rwre::ExperimentConfig cfg;
  std::filesystem::path out;
  int workers = 1;
  std::vector<std::string> outputs;
};

void write_manifest(RunContext& ctx, const std::string& command) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["tool_version"] = kToolVersion;
  m["config_hash"] = rwre::hex64(rwre::fnv1a(rwre::canonical_config(ctx.cfg)));
  m["master_seed"] = ctx.cfg.master_seed;
  auto seeds = nlohmann::ordered_json::array();
  for (int i = 0; i < ctx.cfg.env_seeds; ++i)
    seeds.push_back(rwre::env_seed_for(ctx.cfg, static_cast<std::uint64_t>(i)));
  m["env_seeds"] = seeds;
  m["outputs"] = ctx.outputs;
  rwre::atomic_write(ctx.out / "manifest.json", m.dump(2) + "\n");
}

void emit(RunContext& ctx, const std::string& name, const std::string& content) {
  rwre::atomic_write(ctx.out / name, content);
  ctx.outputs.push_back(name);
}

int run_env(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const std::uint64_t seed = rwre::env_seed_for(cfg, 0);
  const rwre::Environment env =
      rwre::Environment::realize(cfg.spec, seed, cfg.n_max);
  std::ostringstream csv;
  csv << "n,p,log_ratio\n";
  for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
    csv << n << ',' << rwre::format_double(env.site_prob(n)) << ','
        << rwre::format_double(n >= 1 ? env.log_ratio(n) : 0.0) << '\n';
  }
  emit(ctx, "env.csv", csv.str());
  emit(ctx, "spec.json", rwre::spec_json(cfg.spec, seed).dump(2) + "\n");
  write_manifest(ctx, "env");
  return 0;
}

int run_hit(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const rwre::Environment env =
      rwre::Environment::realize(cfg.spec, rwre::env_seed_for(cfg, 0), cfg.n_max);
  const rwre::LogHitProfile prof = rwre::profile(env, cfg.n_max);
  const std::vector<rwre::BoundPair> bounds =
      rwre::envelope_profile(env, cfg.n_max);
  std::ostringstream csv;
  csv << "n,log_delta,log_T,log_lower,log_upper\n";
  for (std::int64_t n = 1; n <= cfg.n_max; ++n) {
    const auto& b = bounds[static_cast<std::size_t>(n - 1)];
    csv << n << ',' << rwre::format_double(prof.log_delta[static_cast<std::size_t>(n - 1)])
        << ',' << rwre::format_double(prof.log_t[static_cast<std::size_t>(n)]) << ','
        << rwre::format_double(b.log_lower) << ',' << rwre::format_double(b.log_upper)
        << '\n';
  }
  emit(ctx, "hit.csv", csv.str());
  write_manifest(ctx, "hit");
  return 0;
}

int run_walk(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const std::int64_t runs = cfg.env_seeds * cfg.replicates;
  std::vector<rwre::WalkSummary> summaries(static_cast<std::size_t>(runs));
  std::vector<rwre::Environment> envs;
  envs.reserve(static_cast<std::size_t>(cfg.env_seeds));
  for (int i = 0; i < cfg.env_seeds; ++i)
    envs.emplace_back(cfg.spec, rwre::env_seed_for(cfg, static_cast<std::uint64_t>(i)));
  rwre::parallel_for(ctx.workers, runs, [&](std::int64_t j) {
    const auto env_idx = static_cast<std::size_t>(j / cfg.replicates);
    summaries[static_cast<std::size_t>(j)] = rwre::simulate(
        envs[env_idx], cfg.steps,
        rwre::rng::substream(cfg.master_seed, rwre::rng::kWalkStream,
                             static_cast<std::uint64_t>(j)));
  });
  std::ostringstream csv;
  csv << "t,position,running_max,replicate,env_seed,walk_seed\n";
  for (std::int64_t j = 0; j < runs; ++j) {
    const auto& s = summaries[static_cast<std::size_t>(j)];
    const std::uint64_t env_seed =
        rwre::env_seed_for(cfg, static_cast<std::uint64_t>(j / cfg.replicates));
    for (const auto& cp : s.checkpoints)
      csv << cp.t << ',' << cp.position << ',' << cp.running_max << ','
          << j % cfg.replicates << ',' << env_seed << ',' << s.seed << '\n';
  }
  emit(ctx, "checkpoints.csv", csv.str());
  write_manifest(ctx, "walk");
  return 0;
}

int run_stationary(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const rwre::Environment env =
      rwre::Environment::realize(cfg.spec, rwre::env_seed_for(cfg, 0), cfg.n_max);
  const rwre::StationaryDist dist = rwre::stationary_exact(env, cfg.n_max);
  const std::vector<double> product =
      rwre::stationary_paper_product(env, cfg.n_max);
  const double power = 1.0 - cfg.spec.alpha;
  std::ostringstream csv;
  csv << "n,log_pi_exact,log_pi_paper_product,n_pow_1_minus_alpha\n";
  for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
    csv << n << ',' << rwre::format_double(dist.log_pi[static_cast<std::size_t>(n)])
        << ',' << rwre::format_double(product[static_cast<std::size_t>(n)]) << ','
        << rwre::format_double(std::pow(static_cast<double>(n), power)) << '\n';
  }
  emit(ctx, "stationary.csv", csv.str());

  const rwre::ExponentFit fit =
      rwre::decay_fit(dist, cfg.spec.alpha, cfg.fit_lo, cfg.fit_hi);
  nlohmann::ordered_json rep;
  rep["truncation_tail"] = dist.truncation_tail;
  rep["log_norm"] = dist.log_norm;
  rep["decay_fit"] = {{"exponent", fit.exponent},
                      {"rate", fit.prefactor},
                      {"r_squared", fit.r_squared},
                      {"window", {fit.window_lo, fit.window_hi}}};
  emit(ctx, "report.json", rep.dump(2) + "\n");
  write_manifest(ctx, "stationary");
  return 0;
}

int run_fit(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  nlohmann::ordered_json rep;

  // Growth fit per environment seed, plus the median.
  std::vector<double> leading(static_cast<std::size_t>(cfg.env_seeds));
  auto fits = nlohmann::ordered_json::array();
  const rwre::FitMode mode = cfg.fit_mode == "fixed"
                                 ? rwre::FitMode::FixedExponent
                                 : rwre::FitMode::FreeExponent;
  std::vector<nlohmann::ordered_json> rows(static_cast<std::size_t>(cfg.env_seeds));
  rwre::parallel_for(ctx.workers, cfg.env_seeds, [&](std::int64_t i) {
    const rwre::Environment env(
        cfg.spec, rwre::env_seed_for(cfg, static_cast<std::uint64_t>(i)));
    const rwre::LogHitProfile prof = rwre::profile(env, cfg.n_max);
    const rwre::ExponentFit f =
        rwre::fit_growth(prof, mode, cfg.gamma, cfg.fit_lo, cfg.fit_hi);
    leading[static_cast<std::size_t>(i)] =
        mode == rwre::FitMode::FreeExponent ? f.exponent : f.prefactor;
    rows[static_cast<std::size_t>(i)] = {{"env_seed", env.seed()},
                                         {"exponent", f.exponent},
                                         {"prefactor", f.prefactor},
                                         {"r_squared", f.r_squared}};
  });
  for (auto& r : rows) fits.push_back(std::move(r));
  std::sort(leading.begin(), leading.end());
  rep["growth_fits"] = fits;
  rep["median"] = leading[leading.size() / 2];

  // Envelope statistics when an exponent hypothesis is configured.
  if (cfg.beta > 0.0 && cfg.steps > 0) {
    const std::int64_t runs = cfg.env_seeds * cfg.replicates;
    std::vector<rwre::WalkSummary> summaries(static_cast<std::size_t>(runs));
    std::vector<rwre::Environment> envs;
    for (int i = 0; i < cfg.env_seeds; ++i)
      envs.emplace_back(cfg.spec,
                        rwre::env_seed_for(cfg, static_cast<std::uint64_t>(i)));
    rwre::parallel_for(ctx.workers, runs, [&](std::int64_t j) {
      summaries[static_cast<std::size_t>(j)] = rwre::simulate(
          envs[static_cast<std::size_t>(j / cfg.replicates)], cfg.steps,
          rwre::rng::substream(cfg.master_seed, rwre::rng::kWalkStream,
                               static_cast<std::uint64_t>(j)));
    });
    const rwre::EnvelopeStat es =
        rwre::envelope_stats(summaries, cfg.beta, cfg.hypothesis);
    auto cps = nlohmann::ordered_json::array();
    for (const auto& c : es.per_checkpoint)
      cps.push_back({{"t", c.t},
                     {"q10", c.q10},
                     {"q25", c.q25},
                     {"median", c.median},
                     {"q75", c.q75},
                     {"q90", c.q90}});
    rep["envelope"] = {{"beta", es.beta},
                       {"hypothesis", es.hypothesis},
                       {"fraction_within_factor2", es.fraction_within_factor2},
                       {"checkpoints", cps}};
  }
  emit(ctx, "report.json", rep.dump(2) + "\n");
  write_manifest(ctx, "fit");
  return 0;
}

int run_suite(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  rwre::SuiteBudget budget;
  budget.n_max = cfg.n_max;
  budget.steps = cfg.steps;
  budget.env_seeds = cfg.env_seeds;
  budget.replicates = static_cast<int>(cfg.replicates);
  budget.workers = ctx.workers;
  const rwre::SuiteReport rep =
      rwre::theorem_suite(cfg.spec, cfg.master_seed, budget);
  emit(ctx, "report.json", rwre::suite_report_json(rep).dump(2) + "\n");
  write_manifest(ctx, "suite");
  return 0;
}

int fail(RunContext* ctx, int code, const char* kind, const std::string& msg) {
  nlohmann::ordered_json err;
  err["error"] = kind;
  err["message"] = msg;
  err["exit_code"] = code;
  std::cerr << err.dump() << '\n';
  if (ctx) {
    try {
      rwre::atomic_write(ctx->out / "error.json", err.dump(2) + "\n");
    } catch (...) {
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random walk in randomly perturbed random environments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int workers = 1;
  std::optional<std::uint64_t> seed_override;

  app.add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads (never affects results)");
  app.add_option("--seed", seed_override, "override the config master seed");

  auto* c_env = app.add_subcommand("env", "realize and export an environment");
  auto* c_hit = app.add_subcommand("hit", "hitting-time profile and bounds");
  auto* c_walk = app.add_subcommand("walk", "simulate walks, export checkpoints");
  auto* c_stat = app.add_subcommand("stationary", "stationary distribution and decay fit");
  auto* c_fit = app.add_subcommand("fit", "growth and envelope fits");
  auto* c_suite = app.add_subcommand("suite", "regime-dispatched verification battery");

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.out = out_dir;
  ctx.workers = std::max(1, workers);
  try {
    ctx.cfg = rwre::load_config(config_path);
    if (seed_override) ctx.cfg.master_seed = *seed_override;
  } catch (const std::exception& e) {
    return fail(nullptr, 2, "config", e.what());
  }

  try {
    if (c_env->parsed()) return run_env(ctx);
    if (c_hit->parsed()) return run_hit(ctx);
    if (c_walk->parsed()) return run_walk(ctx);
    if (c_stat->parsed()) return run_stationary(ctx);
    if (c_fit->parsed()) return run_fit(ctx);
    if (c_suite->parsed()) return run_suite(ctx);
  } catch (const rwre::ConfigError& e) {
    return fail(&ctx, 2, "config", e.what());
  } catch (const rwre::SpecError& e) {
    return fail(&ctx, 2, "spec", e.what());
  } catch (const rwre::NotErgodicError& e) {
    return fail(&ctx, 3, "not_ergodic", e.what());
  } catch (const rwre::DivergentError& e) {
    return fail(&ctx, 3, "divergent", e.what());
  } catch (const rwre::TailUnboundedError& e) {
    return fail(&ctx, 3, "tail_unbounded", e.what());
  } catch (const rwre::DegenerateWindowError& e) {
    return fail(&ctx, 3, "degenerate_window", e.what());
  } catch (const rwre::ResourceError& e) {
    return fail(&ctx, 4, "resource", e.what());
  } catch (const std::exception& e) {
    return fail(&ctx, 4, "internal", e.what());
  }
  return 0;
}
