#ifndef RWRE_STATIONARY_HPP
#define RWRE_STATIONARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwre/envmodel.hpp"
#include "rwre/fitting.hpp"
#include "rwre/logsum.hpp"

// Stationary distribution of the ergodic chain. The production route is the
// detailed-balance recursion
//
//   pi_{n+1} = pi_n q_n / p_{n+1},
//
// which this chain satisfies exactly; the textbook product
// prod_{k<=n} (q_k/p_k) is also exposed (stationary_paper_product) and
// agrees with the recursion up to a bounded additive log offset, so both
// give the same decay rate.
namespace rwre {

struct NotErgodicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailUnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StationaryDist {
  std::vector<double> log_pi;  // n = 0..n_max, normalized
  double log_norm = 0.0;       // log of the normalizing sum (unnormalized scale)
  double truncation_tail = 0.0;  // bound on the normalized mass beyond n_max
};

namespace detail {

// Unnormalized log weights by the reversibility recursion, compensated so
// consecutive differences stay accurate to the increments.
template <class Env>
std::vector<double> balance_log_weights(const Env& env, std::int64_t n_max) {
  std::vector<double> x(static_cast<std::size_t>(n_max) + 1);
  KahanSum cum;
  x[0] = 0.0;
  for (std::int64_t n = 0; n < n_max; ++n) {
    const double q_n = 1.0 - env.site_prob(n);
    const double p_next = env.site_prob(n + 1);
    cum.add(std::log(q_n) - std::log(p_next));
    x[static_cast<std::size_t>(n) + 1] = cum.value();
  }
  return x;
}

}  // namespace detail

// Core computation; certifies the truncation tail from the recent empirical
// drift of the weight ratios (geometric domination) and throws
// TailUnboundedError when no decay can be certified within n_max.
template <class Env>
StationaryDist stationary_core(const Env& env, std::int64_t n_max) {
  if (n_max < 10) throw SpecError("stationary needs n_max >= 10");
  const std::vector<double> x = detail::balance_log_weights(env, n_max);

  // Windowed drift of log pi near the truncation point.
  const std::int64_t w = std::max<std::int64_t>(100, n_max / 10);
  const double drift =
      (x[static_cast<std::size_t>(n_max)] -
       x[static_cast<std::size_t>(n_max - w)]) /
      static_cast<double>(w);
  if (!(drift < 0.0))
    throw TailUnboundedError(
        "no certified decay of the stationary weights within n_max");
  const double rho = std::exp(drift);
  const double log_tail =
      x[static_cast<std::size_t>(n_max)] + drift - std::log1p(-rho);

  LogSumAccumulator norm;
  for (double v : x) norm.add(v);

  StationaryDist out;
  out.log_norm = norm.value();
  out.log_pi.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.log_pi[i] = x[i] - out.log_norm;
  out.truncation_tail = std::exp(log_tail - out.log_norm);
  if (!(out.truncation_tail < 1e-10))
    throw TailUnboundedError("certified tail mass above 1e-10; raise n_max");
  return out;
}

// Classification gate for law-backed environments: NullRecurrent and
// Transient regimes have no stationary distribution.
inline StationaryDist stationary_exact(const Environment& env,
                                       std::int64_t n_max) {
  const RegimeClass r = classify(env.spec());
  if (r == RegimeClass::NullRecurrent || r == RegimeClass::Transient)
    throw NotErgodicError(std::string("regime ") + to_string(r) +
                          " admits no stationary distribution");
  return stationary_core(env, n_max);
}

inline StationaryDist stationary_exact(const TableEnv& env,
                                       std::int64_t n_max) {
  return stationary_core(env, n_max);
}

// The rate formula pi_n ~ C prod_{k=1}^{n} (q_k/p_k), reported as
// unnormalized log values; entry n is the log product (entry 0 = 0).
template <class Env>
std::vector<double> stationary_paper_product(const Env& env,
                                             std::int64_t n_max) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  KahanSum cum;
  out[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    cum.add(-env.log_ratio(n));
    out[static_cast<std::size_t>(n)] = cum.value();
  }
  return out;
}

// Least-squares slope of -log pi_n against n^{1-alpha} over [lo, hi]
// (default [n_max/10, n_max]); the slope estimates the decay rate.
inline ExponentFit decay_fit(const StationaryDist& dist, double alpha,
                             std::int64_t lo = -1, std::int64_t hi = -1) {
  const auto n_max = static_cast<std::int64_t>(dist.log_pi.size()) - 1;
  if (hi <= 0) hi = n_max;
  if (lo <= 0) lo = std::max<std::int64_t>(1, n_max / 10);
  hi = std::min(hi, n_max);
  if (hi - lo + 1 < 10)
    throw DegenerateWindowError("decay fit window holds fewer than 10 sites");

  const double power = 1.0 - alpha;
  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(hi - lo + 1));
  ys.reserve(xs.capacity());
  for (std::int64_t n = lo; n <= hi; ++n) {
    xs.push_back(std::pow(static_cast<double>(n), power));
    ys.push_back(-dist.log_pi[static_cast<std::size_t>(n)]);
  }
  const LinearFit f = least_squares(xs, ys);
  ExponentFit out;
  out.mode = FitMode::FixedExponent;
  out.exponent = power;
  out.prefactor = f.slope;
  out.r_squared = f.r_squared;
  out.window_lo = lo;
  out.window_hi = hi;
  return out;
}

}  // namespace rwre

#endif
