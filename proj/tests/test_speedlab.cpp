#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rwre/speedlab.hpp"

using namespace rwre;

namespace {
LogHitProfile synthetic_profile(double prefactor, double gamma,
                                std::int64_t n_max) {
  LogHitProfile prof;
  prof.log_t.resize(n_max + 1);
  prof.log_delta.resize(n_max);
  prof.log_t[0] = kNegInf;
  for (std::int64_t n = 1; n <= n_max; ++n)
    prof.log_t[n] = prefactor * std::pow((double)n, gamma);
  for (std::int64_t i = 0; i < n_max; ++i) prof.log_delta[i] = 0.0;
  return prof;
}
}  // namespace

TEST_CASE("growth fits recover exact synthetic laws") {
  const LogHitProfile prof = synthetic_profile(2.0, 0.25, 100000);
  const ExponentFit free = fit_growth(prof, FitMode::FreeExponent);
  CHECK(free.exponent == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(free.prefactor == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(free.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const ExponentFit fixed = fit_growth(prof, FitMode::FixedExponent, 0.25);
  CHECK(fixed.prefactor == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fixed.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_growth(prof, FitMode::FreeExponent, 0.0, 50, 55),
                  DegenerateWindowError);
}

TEST_CASE("scaling T by a constant moves the intercept, not the slope") {
  const LogHitProfile base = synthetic_profile(2.0, 0.75, 100000);
  LogHitProfile scaled = base;
  for (auto& v : scaled.log_t) v += 5.0;  // T -> e^5 T
  scaled.log_t[0] = kNegInf;
  const double s0 =
      fit_growth(base, FitMode::FreeExponent, 0.0, 1000, 100000).exponent;
  const double s1 =
      fit_growth(scaled, FitMode::FreeExponent, 0.0, 1000, 100000).exponent;
  CHECK(std::abs(s1 - s0) <= 0.01);
}

TEST_CASE("envelope ratios concentrate on the synthetic constant") {
  std::vector<WalkSummary> summaries;
  const auto sched = geometric_schedule(1000000);
  for (int rep = 0; rep < 5; ++rep) {
    WalkSummary s;
    s.steps = 1000000;
    s.seed = rep;
    for (const std::uint64_t t : sched) {
      const double lt = std::log((double)t);
      const auto rm = (std::int64_t)(3.0 * lt * lt);
      s.checkpoints.push_back({t, rm, rm});
    }
    summaries.push_back(std::move(s));
  }
  const EnvelopeStat es = envelope_stats(summaries, 2.0, 3.0);
  REQUIRE(!es.per_checkpoint.empty());
  CHECK(es.per_checkpoint.back().median == doctest::Approx(3.0).epsilon(0.02));
  CHECK(es.fraction_within_factor2 == doctest::Approx(1.0).epsilon(1e-12));

  // Quantiles do not depend on replicate order.
  std::vector<WalkSummary> shuffled(summaries.rbegin(), summaries.rend());
  const EnvelopeStat es2 = envelope_stats(shuffled, 2.0, 3.0);
  for (std::size_t c = 0; c < es.per_checkpoint.size(); ++c) {
    CHECK(es.per_checkpoint[c].median == es2.per_checkpoint[c].median);
    CHECK(es.per_checkpoint[c].q10 == es2.per_checkpoint[c].q10);
    CHECK(es.per_checkpoint[c].q90 == es2.per_checkpoint[c].q90);
  }
}

TEST_CASE("theorem suite: identities pass and reports are deterministic") {
  SuiteBudget budget;
  budget.n_max = 2000;
  budget.steps = 20000;
  budget.env_seeds = 2;
  budget.replicates = 2;

  const PerturbationSpec srw =
      testutil::single_atom(Variant::PerturbedSRW, 0.5, 0.0, 1.0, 0.2);
  const SuiteReport rep = theorem_suite(srw, 99, budget);
  CHECK(rep.regime == RegimeClass::NullRecurrent);
  REQUIRE(rep.checks.size() >= 3);
  for (const auto& c : rep.checks) CHECK(c.pass);

  const SuiteReport rep2 = theorem_suite(srw, 99, budget);
  CHECK(suite_report_json(rep).dump() == suite_report_json(rep2).dump());

  SuiteBudget b4 = budget;
  b4.workers = 4;
  const SuiteReport rep4 = theorem_suite(srw, 99, b4);
  CHECK(suite_report_json(rep).dump() == suite_report_json(rep4).dump());
}

TEST_CASE("transient walks stay out and keep finite envelope ratios") {
  PerturbationSpec spec;
  spec.variant = Variant::PerturbedSinai;
  spec.alpha = 0.3;
  spec.delta = 0.2;
  spec.dist.atoms = {{0.35, -0.25, 0.5}, {0.65, -0.25, 0.5}};
  std::vector<WalkSummary> walks;
  for (std::uint64_t r = 0; r < 8; ++r) {
    const Environment env(spec, rng::substream(31, rng::kEnvStream, r));
    walks.push_back(simulate(env, 1000000,
                             rng::substream(31, rng::kWalkStream, r)));
  }
  const EnvelopeStat es = envelope_stats(walks, 1.0 / spec.alpha);
  REQUIRE(!es.per_checkpoint.empty());
  CHECK(std::isfinite(es.per_checkpoint.back().median));
  CHECK(es.per_checkpoint.back().median > 0.0);
  // qualitative transience: the walk ends far from a fixed window at the
  // origin in every replicate
  for (const auto& w : walks) CHECK(w.final_position > w.max_position / 4);
}

TEST_CASE("theorem suite: ergodic battery includes the quantitative checks") {
  PerturbationSpec spec;
  spec.variant = Variant::PerturbedSinai;
  spec.alpha = 0.25;
  spec.delta = 0.2;
  spec.dist.atoms = {{0.4, 0.1, 0.5}, {0.6, 0.1, 0.5}};
  SuiteBudget budget;
  budget.n_max = 20000;
  budget.steps = 200000;
  budget.env_seeds = 3;
  budget.replicates = 2;
  const SuiteReport rep = theorem_suite(spec, 11, budget);
  CHECK(rep.regime == RegimeClass::Ergodic);
  bool growth = false, decay = false, envelope = false;
  for (const auto& c : rep.checks) {
    if (c.name == "growth_prefactor") growth = std::isfinite(c.measured);
    if (c.name == "stationary_decay_rate") decay = std::isfinite(c.measured);
    if (c.name == "envelope_constant") envelope = std::isfinite(c.measured);
  }
  CHECK(growth);
  CHECK(decay);
  CHECK(envelope);
  // identities always hold regardless of budget
  for (const auto& c : rep.checks)
    if (c.name == "delta_recursion_vs_closed_form" ||
        c.name == "submartingale_residual" ||
        c.name == "hitting_time_sandwich_violations")
      CHECK(c.pass);
}

TEST_CASE("theorem suite: unknown regime runs identities only") {
  PerturbationSpec open;
  open.variant = Variant::PerturbedSinai;
  open.alpha = 0.25;
  open.delta = 0.2;
  open.dist.atoms = {{0.4, 0.2, 0.25},
                     {0.4, -0.2, 0.25},
                     {0.6, 0.1, 0.25},
                     {0.6, -0.1, 0.25}};
  SuiteBudget budget;
  budget.n_max = 1500;
  budget.steps = 5000;
  budget.env_seeds = 1;
  budget.replicates = 1;
  const SuiteReport rep = theorem_suite(open, 7, budget);
  CHECK(rep.regime == RegimeClass::Unknown);
  CHECK(rep.checks.size() == 3);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("theorem suite: transient battery emits return-probability checks") {
  SuiteBudget budget;
  budget.n_max = 2000;
  budget.steps = 20000;
  budget.env_seeds = 1;
  budget.replicates = 1;
  const SuiteReport rep =
      theorem_suite(testutil::sinai_spec(0.15, -0.3, 0.3), 5, budget);
  CHECK(rep.regime == RegimeClass::Transient);
  bool unit_interval = false, summable = false;
  for (const auto& c : rep.checks) {
    if (c.name == "return_prob_unit_interval") unit_interval = c.pass;
    if (c.name == "return_prob_summable") summable = c.pass;
  }
  CHECK(unit_interval);
  CHECK(summable);
}
