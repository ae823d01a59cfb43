#ifndef RWRE_SPEEDLAB_HPP
#define RWRE_SPEEDLAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "rwre/envmodel.hpp"
#include "rwre/fitting.hpp"
#include "rwre/walker.hpp"

namespace rwre {

// Per-checkpoint quantiles of running_max(t) / (log t)^beta across a set of
// walks sharing one checkpoint schedule.
struct EnvelopeCheckpointStat {
  std::uint64_t t = 0;
  double q10 = 0, q25 = 0, median = 0, q75 = 0, q90 = 0;
};

struct EnvelopeStat {
  double beta = 0.0;
  std::vector<EnvelopeCheckpointStat> per_checkpoint;
  double hypothesis = 0.0;  // 0 when no constant hypothesis was supplied
  // Fraction of final-decade ratios inside [1/2, 2] x hypothesis.
  double fraction_within_factor2 = 0.0;
};

// Checkpoints with t < 100 are skipped (the laws are asymptotic in log t).
EnvelopeStat envelope_stats(const std::vector<WalkSummary>& summaries,
                            double beta, double constant_hypothesis = 0.0);

struct SuiteBudget {
  std::int64_t n_max = 100000;    // site budget for profiles/stationary
  std::uint64_t steps = 1000000;  // time budget per walk
  int env_seeds = 5;
  int replicates = 8;
  int workers = 1;  // affects wall time only, never results
};

struct SuiteCheck {
  std::string name;
  double target = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;  // |measured - target| <= tolerance passes
  bool pass = false;
};

// Lower bounds of the "infinitely many t" kind can only be witnessed at
// desk scale, never refuted; these entries carry no pass/fail semantics.
struct SuiteWitness {
  std::string name;
  std::uint64_t largest_t = 0;  // 0: never witnessed within the budget
  double value = 0.0;
};

struct SuiteReport {
  RegimeClass regime = RegimeClass::Unknown;
  Moments law_moments;
  std::vector<SuiteCheck> checks;
  std::vector<SuiteWitness> witnesses;
  std::uint64_t master_seed = 0;
  SuiteBudget budget;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Regime-dispatched verification battery: exact identities always, plus the
// growth/decay/envelope laws that the classified regime pins down
// quantitatively. Deterministic given (spec, master_seed, budget).
SuiteReport theorem_suite(const PerturbationSpec& spec,
                          std::uint64_t master_seed,
                          const SuiteBudget& budget = {});

nlohmann::ordered_json suite_report_json(const SuiteReport& report);

}  // namespace rwre

#endif
