#ifndef RWRE_HITTIME_HPP
#define RWRE_HITTIME_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwre/logsum.hpp"

// Expected hitting times of the quenched birth-death chain. T(n), the
// expected time to reach n from 0, decomposes as a sum of one-step passage
// times Delta_i with
//
//   Delta_0 = 1/q_0,   Delta_i = (1 + p_i Delta_{i-1}) / q_i,
//
// equivalently Delta_i = sum_{j=0}^{i} q_{i-j}^{-1} prod_{k=i-j+1}^{i}
// (p_k/q_k). These grow like exp(n^gamma), so everything here lives in
// natural-log space.
namespace rwre {

struct DivergentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScaleOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LogHitProfile {
  std::vector<double> log_delta;  // entry i: log Delta_i, i = 0..n_max-1
  std::vector<double> log_t;      // entry n: log T(n), n = 0..n_max; log_t[0] = -inf

  std::int64_t n_max() const {
    return static_cast<std::int64_t>(log_delta.size());
  }
};

// Forward recursion, O(n_max). This is the production path.
template <class Env>
LogHitProfile profile(const Env& env, std::int64_t n_max) {
  LogHitProfile out;
  out.log_delta.resize(static_cast<std::size_t>(n_max));
  out.log_t.resize(static_cast<std::size_t>(n_max) + 1);
  out.log_t[0] = kNegInf;

  const double q0 = 1.0 - env.site_prob(0);
  out.log_delta[0] = -std::log(q0);
  out.log_t[1] = out.log_delta[0];
  for (std::int64_t i = 1; i < n_max; ++i) {
    const double p = env.site_prob(i);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    // log(1 + p_i Delta_{i-1}) via log-sum-exp of {0, log p_i + log Delta_{i-1}}.
    const double u = log_p + out.log_delta[i - 1];
    out.log_delta[i] = log1p_exp(u) - log_q;
    out.log_t[i + 1] = log_add(out.log_t[i], out.log_delta[i]);
  }
  return out;
}

// Closed-form evaluation of log Delta_i as a log-sum-exp over the i+1
// terms, O(i). Independent route used to cross-check the recursion.
template <class Env>
double closed_form_log_delta(const Env& env, std::int64_t i) {
  LogSumAccumulator acc;
  KahanSum moving;  // sum_{k=m+1}^{i} log(p_k/q_k)
  for (std::int64_t m = i; m >= 0; --m) {
    const double p = env.site_prob(m);
    acc.add(-std::log1p(-p) + moving.value());
    if (m >= 1) moving.add(env.log_ratio(m));
  }
  return acc.value();
}

enum class ResidualForm { Absolute, Relative };

// One-step identity of the expected-time ladder:
//   q_n Delta_n - p_n Delta_{n-1} - 1 = 0   (n >= 1),
//   q_0 T(1) - 1 = 0                        (n = 0).
// Absolute form exponentiates around the common scale and throws
// ScaleOverflowError once that scale exceeds double range; the relative
// form divides by q_n Delta_n and is finite at any scale.
template <class Env>
double submartingale_residual(const Env& env, const LogHitProfile& prof,
                              std::int64_t n,
                              ResidualForm form = ResidualForm::Relative) {
  if (n == 0) {
    const double q0 = 1.0 - env.site_prob(0);
    return q0 * std::exp(prof.log_t[1]) - 1.0;
  }
  const double p = env.site_prob(n);
  const double m = prof.log_delta[n] + std::log1p(-p);      // log(q_n Delta_n)
  const double u = prof.log_delta[n - 1] + std::log(p);     // log(p_n Delta_{n-1})
  if (form == ResidualForm::Absolute) {
    if (m > 700.0)
      throw ScaleOverflowError(
          "Delta too large to exponentiate; use the relative form");
    return -std::exp(m) * std::expm1(u - m) - 1.0;
  }
  // (q_n Delta_n - p_n Delta_{n-1} - 1) / (q_n Delta_n)
  return -std::expm1(u - m) - std::exp(-m);
}

// Deterministic envelope around log T(n):
//   lower: max prefix sum of log(p_k/q_k)  (empty sum included),
//   upper: log(n (n+1) / delta) + max prefix sum + max negated prefix sum.
struct BoundPair {
  double log_lower = 0.0;
  double log_upper = 0.0;
  double constant_c = 0.0;  // 1/delta
};

namespace detail {
struct PrefixMaxima {
  double max_sum = 0.0;      // over 0 <= i <= n-1, empty sum = 0
  double max_neg_sum = 0.0;  // of the negated sums
};
}  // namespace detail

template <class Env>
BoundPair envelope_bounds(const Env& env, std::int64_t n) {
  detail::PrefixMaxima m;
  KahanSum s;
  for (std::int64_t i = 1; i <= n - 1; ++i) {
    s.add(env.log_ratio(i));
    m.max_sum = std::max(m.max_sum, s.value());
    m.max_neg_sum = std::max(m.max_neg_sum, -s.value());
  }
  const double delta = env.ellipticity_delta();
  BoundPair b;
  b.constant_c = 1.0 / delta;
  b.log_lower = m.max_sum;
  b.log_upper = std::log(static_cast<double>(n) * (static_cast<double>(n) + 1.0) / delta) +
                m.max_sum + m.max_neg_sum;
  return b;
}

// Envelope for every n in 1..n_max in one O(n_max) sweep; entry n-1 is the
// pair for target n.
template <class Env>
std::vector<BoundPair> envelope_profile(const Env& env, std::int64_t n_max) {
  std::vector<BoundPair> out;
  out.reserve(static_cast<std::size_t>(n_max));
  const double delta = env.ellipticity_delta();
  detail::PrefixMaxima m;
  KahanSum s;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    // prefix sums up to i = n-1
    if (n >= 2) {
      s.add(env.log_ratio(n - 1));
      m.max_sum = std::max(m.max_sum, s.value());
      m.max_neg_sum = std::max(m.max_neg_sum, -s.value());
    }
    BoundPair b;
    b.constant_c = 1.0 / delta;
    b.log_lower = m.max_sum;
    b.log_upper = std::log(static_cast<double>(n) * (static_cast<double>(n) + 1.0) / delta) +
                  m.max_sum + m.max_neg_sum;
    out.push_back(b);
  }
  return out;
}

// Probability that the walk started at 2n ever hits n, for transient
// environments:
//
//   M_n = 1 + sum_{j>=1} exp R_n(j),   a_n = M_n^{-1} sum_{j>=n} exp R_n(j),
//
// with R_n(j) = sum_{k=1}^{j} log(p_{n+k}/q_{n+k}). Both series are summed
// in log space; truncation stops once the partial sums have stayed below
// `floor_log` for a full window with negative windowed drift, and the tail
// is bounded by a geometric series at the windowed drift ratio.
struct ReturnProbability {
  std::int64_t n = 0;
  double log_m = 0.0;           // log M_n
  double log_a = kNegInf;       // log a_n
  std::int64_t truncation_j = 0;
  double tail_bound = 0.0;      // bound on the truncated mass of either series

  double a() const {
    const double v = std::exp(log_a);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
};

struct ReturnProbOptions {
  double tolerance = 1e-12;        // required bound on the truncated mass
  std::int64_t window = 1000;      // consecutive terms below the floor
  double floor_log = -40.0;
  std::int64_t horizon = 1000000;  // divergence-detection probe limit
};

template <class Env>
ReturnProbability return_prob(const Env& env, std::int64_t n,
                              ReturnProbOptions opt = {}) {
  LogSumAccumulator acc_m;
  acc_m.add(0.0);  // the leading 1 of M_n
  LogSumAccumulator acc_num;

  const std::int64_t w = opt.window;
  std::vector<double> ring(static_cast<std::size_t>(w) + 1, 0.0);  // R values
  KahanSum r;
  std::int64_t below = 0;

  for (std::int64_t j = 1; j <= opt.horizon; ++j) {
    r.add(env.log_ratio(n + j));
    const double rj = r.value();
    ring[static_cast<std::size_t>(j % (w + 1))] = rj;
    acc_m.add(rj);
    if (j >= n) acc_num.add(rj);
    below = (rj < opt.floor_log) ? below + 1 : 0;

    if (below >= w && j >= n + w) {
      const double r_back = ring[static_cast<std::size_t>((j - w) % (w + 1))];
      const double drift = (rj - r_back) / static_cast<double>(w);
      if (drift < 0.0) {
        const double rho = std::exp(drift);
        double r_max = kNegInf;
        for (double v : ring) r_max = std::max(r_max, v);
        const double tail =
            std::exp(r_max + drift - std::log1p(-rho));  // r_max * rho/(1-rho)
        if (tail < opt.tolerance) {
          ReturnProbability out;
          out.n = n;
          out.log_m = acc_m.value();
          out.log_a = acc_num.value() - acc_m.value();
          out.truncation_j = j;
          out.tail_bound = tail;
          return out;
        }
      }
    }
  }
  throw DivergentError(
      "return-probability series shows no certified decay within the probe "
      "horizon (environment not transient?)");
}

}  // namespace rwre

#endif
