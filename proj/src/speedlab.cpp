#include "rwre/speedlab.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "rwre/hittime.hpp"
#include "rwre/parallel.hpp"
#include "rwre/stationary.hpp"

namespace rwre {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace

EnvelopeStat envelope_stats(const std::vector<WalkSummary>& summaries,
                            double beta, double constant_hypothesis) {
  EnvelopeStat out;
  out.beta = beta;
  out.hypothesis = constant_hypothesis;
  if (summaries.empty()) return out;

  const std::size_t n_cp = summaries.front().checkpoints.size();
  for (const auto& s : summaries)
    if (s.checkpoints.size() != n_cp)
      throw SpecError("envelope_stats needs a shared checkpoint schedule");

  std::uint64_t t_final = 0;
  for (std::size_t c = 0; c < n_cp; ++c)
    t_final = std::max(t_final, summaries.front().checkpoints[c].t);

  std::int64_t inside = 0, total = 0;
  for (std::size_t c = 0; c < n_cp; ++c) {
    const std::uint64_t t = summaries.front().checkpoints[c].t;
    if (t < 100) continue;
    const double denom = std::pow(std::log(static_cast<double>(t)), beta);
    std::vector<double> ratios;
    ratios.reserve(summaries.size());
    for (const auto& s : summaries) {
      if (s.checkpoints[c].t != t)
        throw SpecError("envelope_stats needs a shared checkpoint schedule");
      const double r = static_cast<double>(s.checkpoints[c].running_max) / denom;
      ratios.push_back(r);
      if (constant_hypothesis > 0.0 && t >= t_final / 10) {
        ++total;
        if (r >= 0.5 * constant_hypothesis && r <= 2.0 * constant_hypothesis)
          ++inside;
      }
    }
    EnvelopeCheckpointStat st;
    st.t = t;
    st.q10 = quantile(ratios, 0.10);
    st.q25 = quantile(ratios, 0.25);
    st.median = quantile(ratios, 0.50);
    st.q75 = quantile(ratios, 0.75);
    st.q90 = quantile(ratios, 0.90);
    out.per_checkpoint.push_back(st);
  }
  if (total > 0)
    out.fraction_within_factor2 =
        static_cast<double>(inside) / static_cast<double>(total);
  return out;
}

namespace {

struct IdentityStats {
  double max_closed_form_err = 0.0;
  double max_residual = 0.0;
  std::int64_t sandwich_violations = 0;
};

IdentityStats identity_battery(const std::vector<Environment>& envs,
                               std::int64_t n_max) {
  IdentityStats st;
  const std::int64_t n = std::min<std::int64_t>(n_max, 5000);
  for (const Environment& env : envs) {
    const LogHitProfile prof = profile(env, n);
    for (int k = 1; k <= 32; ++k) {
      const std::int64_t i = (n - 1) * k / 32;
      const double rec = prof.log_delta[static_cast<std::size_t>(i)];
      const double closed = closed_form_log_delta(env, i);
      const double err = std::abs(rec - closed) / std::max(1.0, std::abs(rec));
      st.max_closed_form_err = std::max(st.max_closed_form_err, err);
    }
    for (std::int64_t m = 0; m <= std::min<std::int64_t>(200, n - 1); ++m) {
      const double res = std::abs(submartingale_residual(env, prof, m));
      st.max_residual = std::max(st.max_residual, res);
    }
    for (std::int64_t target : {std::int64_t(10), std::int64_t(100),
                                std::int64_t(1000), std::int64_t(10000)}) {
      if (target > n) continue;
      const BoundPair b = envelope_bounds(env, target);
      const double lt = prof.log_t[static_cast<std::size_t>(target)];
      const double slack = 1e-9 * std::max(1.0, std::abs(lt));
      if (!(b.log_lower <= lt + slack && lt <= b.log_upper + slack))
        ++st.sandwich_violations;
    }
  }
  return st;
}

}  // namespace

SuiteReport theorem_suite(const PerturbationSpec& spec,
                          std::uint64_t master_seed,
                          const SuiteBudget& budget) {
  validate(spec);
  SuiteReport rep;
  rep.regime = classify(spec);
  rep.law_moments = moments(spec);
  rep.master_seed = master_seed;
  rep.budget = budget;

  const int ne = std::max(1, budget.env_seeds);
  std::vector<Environment> envs;
  envs.reserve(static_cast<std::size_t>(ne));
  for (int i = 0; i < ne; ++i)
    envs.emplace_back(spec, rng::substream(master_seed, rng::kEnvStream,
                                           static_cast<std::uint64_t>(i)));

  // Exact identities hold in every regime.
  {
    std::vector<Environment> sample(envs.begin(),
                                    envs.begin() + std::min<std::size_t>(3, envs.size()));
    const IdentityStats st = identity_battery(sample, budget.n_max);
    rep.checks.push_back({"delta_recursion_vs_closed_form", 0.0,
                          st.max_closed_form_err, 1e-9,
                          st.max_closed_form_err <= 1e-9});
    rep.checks.push_back({"submartingale_residual", 0.0, st.max_residual, 1e-9,
                          st.max_residual <= 1e-9});
    rep.checks.push_back({"hitting_time_sandwich_violations", 0.0,
                          static_cast<double>(st.sandwich_violations), 0.0,
                          st.sandwich_violations == 0});
  }

  const Moments& m = rep.law_moments;
  const double alpha = spec.alpha;
  const bool sinai = spec.variant == Variant::PerturbedSinai;

  // Trajectory batch shared by the envelope check and the witnesses.
  const std::int64_t n_walks =
      static_cast<std::int64_t>(ne) * std::max(1, budget.replicates);
  std::vector<WalkSummary> walks(static_cast<std::size_t>(n_walks));
  if (budget.steps > 0) {
    parallel_for(budget.workers, n_walks, [&](std::int64_t j) {
      const auto env_idx = static_cast<std::size_t>(j / budget.replicates);
      walks[static_cast<std::size_t>(j)] =
          simulate(envs[env_idx], budget.steps,
                   rng::substream(master_seed, rng::kWalkStream,
                                  static_cast<std::uint64_t>(j)));
    });
  }
  auto free_exponent_median = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> exps(envs.size());
    parallel_for(budget.workers, static_cast<std::int64_t>(envs.size()),
                 [&](std::int64_t i) {
                   const LogHitProfile prof =
                       profile(envs[static_cast<std::size_t>(i)], hi);
                   exps[static_cast<std::size_t>(i)] =
                       fit_growth(prof, FitMode::FreeExponent, 0.0, lo, hi)
                           .exponent;
                 });
    return median(exps);
  };

  switch (rep.regime) {
    case RegimeClass::Ergodic: {
      const double rate =
          sinai ? m.lambda / (1.0 - alpha) : 4.0 * m.mean_y / (1.0 - alpha);
      // T(n) prefactor at the fixed exponent 1 - alpha.
      {
        std::vector<double> prefs(envs.size());
        parallel_for(budget.workers, static_cast<std::int64_t>(envs.size()),
                     [&](std::int64_t i) {
                       const LogHitProfile prof =
                           profile(envs[static_cast<std::size_t>(i)],
                                   budget.n_max);
                       prefs[static_cast<std::size_t>(i)] =
                           fit_growth(prof, FitMode::FixedExponent,
                                      1.0 - alpha)
                               .prefactor;
                     });
        const double med = median(prefs);
        rep.checks.push_back({"growth_prefactor", rate, med, 0.10 * rate,
                              std::abs(med - rate) <= 0.10 * rate});
      }
      // Stationary decay rate.
      {
        std::vector<double> slopes(envs.size());
        parallel_for(budget.workers, static_cast<std::int64_t>(envs.size()),
                     [&](std::int64_t i) {
                       const StationaryDist dist = stationary_exact(
                           envs[static_cast<std::size_t>(i)], budget.n_max);
                       slopes[static_cast<std::size_t>(i)] =
                           decay_fit(dist, alpha).prefactor;
                     });
        const double med = median(slopes);
        rep.checks.push_back({"stationary_decay_rate", rate, med, 0.10 * rate,
                              std::abs(med - rate) <= 0.10 * rate});
      }
      // Envelope constant at the final checkpoint, factor-2 acceptance.
      if (budget.steps >= 100000) {
        const double beta = 1.0 / (1.0 - alpha);
        const double c_hyp = std::pow((1.0 - alpha) / (sinai ? m.lambda
                                                             : 4.0 * m.mean_y),
                                      beta);
        const EnvelopeStat es = envelope_stats(walks, beta, c_hyp);
        const double med = es.per_checkpoint.empty()
                               ? 0.0
                               : es.per_checkpoint.back().median;
        rep.checks.push_back({"envelope_constant", c_hyp, med, c_hyp,
                              med >= 0.5 * c_hyp && med <= 2.0 * c_hyp});
        // Lower bound of the envelope law: witnessed only.
        std::uint64_t best_t = 0;
        double best_v = 0.0;
        for (const auto& w : walks)
          for (const auto& cp : w.checkpoints) {
            if (cp.t < 100) continue;
            const double bound =
                0.5 * c_hyp *
                std::pow(std::log(static_cast<double>(cp.t)), beta);
            if (static_cast<double>(cp.position) >= bound && cp.t >= best_t) {
              best_t = cp.t;
              best_v = static_cast<double>(cp.position) / bound;
            }
          }
        rep.witnesses.push_back({"envelope_lower_bound", best_t, best_v});
      }
      break;
    }
    case RegimeClass::NullRecurrent: {
      double gamma = -1.0;
      double beta = 2.0;
      if (sinai) {
        gamma = 0.5;  // both the off-critical and balanced cases
        beta = 2.0;
      } else if (m.symmetric_balance && alpha < 0.5) {
        gamma = (1.0 - 2.0 * alpha) / 2.0;
        beta = 2.0 / (1.0 - 2.0 * alpha);
      }
      if (gamma > 0.0 && budget.n_max >= 10000) {
        const std::int64_t lo = std::max<std::int64_t>(1000, budget.n_max / 1000);
        const double med = free_exponent_median(lo, budget.n_max);
        rep.checks.push_back({"growth_exponent", gamma, med, 0.05,
                              std::abs(med - gamma) <= 0.05});
      }
      // "Infinitely many t" lower bound: witness the largest t where
      // position/(log t)^beta clears (log log log t)^{-2}.
      std::uint64_t best_t = 0;
      double best_v = 0.0;
      for (const auto& w : walks)
        for (const auto& cp : w.checkpoints) {
          if (cp.t < 100) continue;
          const double lt = std::log(static_cast<double>(cp.t));
          const double lll = std::log(std::log(lt));
          const double thr = std::pow(std::max(lll, 1e-6), -2.0);
          const double ratio =
              static_cast<double>(cp.position) / std::pow(lt, beta);
          if (ratio >= thr && cp.t >= best_t) {
            best_t = cp.t;
            best_v = ratio;
          }
        }
      rep.witnesses.push_back({"recurrent_lower_bound", best_t, best_v});
      break;
    }
    case RegimeClass::Transient: {
      if (sinai && budget.n_max >= 10000) {
        const std::int64_t lo = std::max<std::int64_t>(1000, budget.n_max / 1000);
        const double med = free_exponent_median(lo, budget.n_max);
        rep.checks.push_back({"growth_exponent", alpha, med, 0.05,
                              std::abs(med - alpha) <= 0.05});
      }
      // Return probabilities along a short site ladder.
      {
        double worst_excess = 0.0;
        double total = 0.0;
        bool summable = true;
        try {
          for (std::int64_t site = 1; site <= 50; ++site) {
            ReturnProbOptions opt;
            opt.tolerance = 1e-8;
            const ReturnProbability rp = return_prob(envs.front(), site, opt);
            const double a = std::exp(rp.log_a);
            worst_excess = std::max(worst_excess,
                                    std::max(0.0 - a, a - 1.0));
            total += rp.a();
          }
        } catch (const DivergentError&) {
          summable = false;
        }
        rep.checks.push_back({"return_prob_unit_interval", 0.0, worst_excess,
                              0.0, worst_excess <= 0.0});
        rep.checks.push_back({"return_prob_summable", 1.0,
                              summable && std::isfinite(total) ? 1.0 : 0.0,
                              0.0, summable && std::isfinite(total)});
      }
      if (sinai) {
        // Theorem-style transient lower bound, witnessed only.
        const double beta = 1.0 / alpha;
        std::uint64_t best_t = 0;
        double best_v = 0.0;
        for (const auto& w : walks)
          for (const auto& cp : w.checkpoints) {
            if (cp.t < 100) continue;
            const double lt = std::log(static_cast<double>(cp.t));
            const double thr = std::pow(std::log(lt), -beta - 1.0);
            const double ratio =
                static_cast<double>(cp.position) / std::pow(lt, beta);
            if (ratio >= thr && cp.t >= best_t) {
              best_t = cp.t;
              best_v = ratio;
            }
          }
        rep.witnesses.push_back({"transient_lower_bound", best_t, best_v});
      }
      break;
    }
    case RegimeClass::Unknown:
      // Classification criteria are silent: exact identities only.
      break;
  }
  return rep;
}

nlohmann::ordered_json suite_report_json(const SuiteReport& rep) {
  nlohmann::ordered_json j;
  j["regime"] = to_string(rep.regime);
  j["moments"] = {{"lambda", rep.law_moments.lambda},
                  {"mean_zeta", rep.law_moments.mean_zeta},
                  {"s2", rep.law_moments.s2},
                  {"sigma2", rep.law_moments.sigma2},
                  {"mean_y", rep.law_moments.mean_y},
                  {"symmetric_balance", rep.law_moments.symmetric_balance}};
  j["seeds"] = {{"master", rep.master_seed},
                {"env_stream", rng::kEnvStream},
                {"walk_stream", rng::kWalkStream}};
  j["budget"] = {{"n_max", rep.budget.n_max},
                 {"steps", rep.budget.steps},
                 {"env_seeds", rep.budget.env_seeds},
                 {"replicates", rep.budget.replicates}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks)
    j["checks"].push_back({{"name", c.name},
                           {"target", c.target},
                           {"measured", c.measured},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
  j["witnesses"] = nlohmann::ordered_json::array();
  for (const auto& w : rep.witnesses)
    j["witnesses"].push_back(
        {{"name", w.name}, {"largest_t", w.largest_t}, {"value", w.value}});
  j["all_pass"] = rep.all_pass();
  return j;
}

}  // namespace rwre
