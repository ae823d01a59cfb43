#ifndef RWRE_WALKER_HPP
#define RWRE_WALKER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rwre/rng.hpp"

// Quenched simulation of the reflected nearest-neighbour walk: from n >= 1
// the walk moves to n-1 with probability p_n and to n+1 otherwise; from 0
// it holds with probability p_0 and moves to 1 otherwise. The walk RNG is
// a separate counter stream from the environment RNG, so one environment
// can be reused across many walk seeds.
namespace rwre {

struct WalkCheckpoint {
  std::uint64_t t = 0;
  std::int64_t position = 0;
  std::int64_t running_max = 0;
};

struct WalkSummary {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::int64_t final_position = 0;
  std::int64_t max_position = 0;
  std::vector<WalkCheckpoint> checkpoints;
  // Indexed by site: first_hit[n] = first time at site n (recorded for every
  // site up to max_position), last_visit[n] = last observed time at n.
  std::vector<std::uint64_t> first_hit;
  std::vector<std::uint64_t> last_visit;
};

// Geometric checkpoint times floor(ratio^k), deduplicated, with the final
// step appended. All speed laws are statements in log t.
inline std::vector<std::uint64_t> geometric_schedule(std::uint64_t steps,
                                                     double ratio = 1.5) {
  std::vector<std::uint64_t> out;
  double x = 1.0;
  while (true) {
    const auto t = static_cast<std::uint64_t>(x);
    if (t > steps) break;
    if (out.empty() || out.back() != t) out.push_back(t);
    x *= ratio;
    if (x > 1.9e18) break;
  }
  if (steps > 0 && (out.empty() || out.back() != steps)) out.push_back(steps);
  return out;
}

namespace detail {

// Grow-on-demand jump probability table so the hot loop never recomputes a
// site.
template <class Env>
class SiteTable {
 public:
  explicit SiteTable(const Env& env) : env_(env) { grow(64); }

  double operator[](std::int64_t n) {
    if (n >= static_cast<std::int64_t>(p_.size())) grow(n + 64);
    return p_[static_cast<std::size_t>(n)];
  }

 private:
  void grow(std::int64_t upto) {
    const auto old = static_cast<std::int64_t>(p_.size());
    p_.resize(static_cast<std::size_t>(upto));
    for (std::int64_t i = old; i < upto; ++i)
      p_[static_cast<std::size_t>(i)] = env_.site_prob(i);
  }

  const Env& env_;
  std::vector<double> p_;
};

}  // namespace detail

template <class Env>
WalkSummary simulate(const Env& env, std::uint64_t steps, std::uint64_t seed,
                     std::vector<std::uint64_t> schedule = {}) {
  if (schedule.empty()) schedule = geometric_schedule(steps);
  WalkSummary s;
  s.steps = steps;
  s.seed = seed;
  s.first_hit.push_back(0);
  s.last_visit.push_back(0);

  detail::SiteTable<Env> p(env);
  std::int64_t pos = 0;
  std::int64_t maxpos = 0;
  std::size_t ci = 0;
  while (ci < schedule.size() && schedule[ci] == 0) ++ci;

  for (std::uint64_t t = 0; t < steps; ++t) {
    const double u = rng::uniform01(rng::at(seed, t));
    if (pos == 0) {
      pos = (u < p[0]) ? 0 : 1;
    } else {
      pos += (u < p[pos]) ? -1 : 1;
    }
    const std::uint64_t now = t + 1;
    if (pos > maxpos) {
      maxpos = pos;
      s.first_hit.push_back(now);
      s.last_visit.push_back(now);
    } else {
      s.last_visit[static_cast<std::size_t>(pos)] = now;
    }
    if (ci < schedule.size() && schedule[ci] == now) {
      s.checkpoints.push_back({now, pos, maxpos});
      ++ci;
    }
  }
  s.final_position = pos;
  s.max_position = maxpos;
  return s;
}

struct MeanHitEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t completed = 0;
  std::int64_t censored = 0;
};

// Sample mean of the first-hitting time of site n over independent
// replicates. Runs exceeding step_cap are counted as censored, never
// silently dropped; any censoring biases the mean low.
template <class Env>
MeanHitEstimate mc_mean_hit(const Env& env, std::int64_t n,
                            std::int64_t replicates, std::uint64_t step_cap,
                            std::uint64_t seed) {
  detail::SiteTable<Env> p(env);
  MeanHitEstimate est;
  double sum = 0.0, sum2 = 0.0;
  for (std::int64_t rep = 0; rep < replicates; ++rep) {
    const std::uint64_t rs =
        rng::substream(seed, rng::kHitStream, static_cast<std::uint64_t>(rep));
    std::int64_t pos = 0;
    std::uint64_t t = 0;
    for (; t < step_cap && pos != n; ++t) {
      const double u = rng::uniform01(rng::at(rs, t));
      if (pos == 0)
        pos = (u < p[0]) ? 0 : 1;
      else
        pos += (u < p[pos]) ? -1 : 1;
    }
    if (pos == n) {
      ++est.completed;
      const auto tau = static_cast<double>(t);
      sum += tau;
      sum2 += tau * tau;
    } else {
      ++est.censored;
    }
  }
  if (est.completed > 0) {
    const auto c = static_cast<double>(est.completed);
    est.mean = sum / c;
    if (est.completed > 1) {
      const double var = std::max(0.0, (sum2 - sum * sum / c) / (c - 1.0));
      est.std_error = std::sqrt(var / c);
    }
  }
  return est;
}

struct ReturnEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t replicates = 0;
};

// Fraction of replicates started at 2n that reach n before reaching
// escape_threshold. Differs from the infinite-time return probability by at
// most the probability of returning from the threshold.
template <class Env>
ReturnEstimate mc_return_prob(const Env& env, std::int64_t n,
                              std::int64_t replicates,
                              std::int64_t escape_threshold,
                              std::uint64_t seed) {
  if (escape_threshold <= 0) escape_threshold = 100 * n;
  detail::SiteTable<Env> p(env);
  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < replicates; ++rep) {
    const std::uint64_t rs = rng::substream(seed, rng::kReturnStream,
                                            static_cast<std::uint64_t>(rep));
    std::int64_t pos = 2 * n;
    std::uint64_t t = 0;
    while (pos != n && pos < escape_threshold) {
      const double u = rng::uniform01(rng::at(rs, t++));
      pos += (u < p[pos]) ? -1 : 1;
    }
    if (pos == n) ++hits;
  }
  ReturnEstimate est;
  est.replicates = replicates;
  const auto r = static_cast<double>(replicates);
  est.estimate = static_cast<double>(hits) / r;
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / r);
  return est;
}

struct AuditViolation {
  std::int64_t site = 0;
  std::uint64_t last_visit = 0;
  std::uint64_t first_hit_2n = 0;
};

// Sites violating last_visit(n) <= first_hit(2n). Transient walks should
// produce only finitely many; recurrent walks produce many. Purely
// descriptive: last visits are censored by the end of the run.
inline std::vector<AuditViolation> transience_audit(const WalkSummary& s) {
  std::vector<AuditViolation> out;
  for (std::int64_t n = 1; 2 * n <= s.max_position; ++n) {
    const auto ln = s.last_visit[static_cast<std::size_t>(n)];
    const auto tau2n = s.first_hit[static_cast<std::size_t>(2 * n)];
    if (ln > tau2n) out.push_back({n, ln, tau2n});
  }
  return out;
}

}  // namespace rwre

#endif
