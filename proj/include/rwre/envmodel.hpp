#ifndef RWRE_ENVMODEL_HPP
#define RWRE_ENVMODEL_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwre/rng.hpp"

namespace rwre {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One support point of the joint law of (xi, y).
struct Atom {
  double xi = 0.5;
  double y = 0.0;
  double weight = 1.0;
};

// Finite-support joint law of (xi_1, Y_1).
struct DistributionSpec {
  std::vector<Atom> atoms;
};

enum class Variant { PerturbedSinai, PerturbedSRW };

// Law of the random environment: p_n = clamp(xi_n + Y_n n^{-alpha}).
struct PerturbationSpec {
  Variant variant = Variant::PerturbedSinai;
  double alpha = 0.5;   // perturbation exponent, > 0
  double delta = 0.1;   // ellipticity, in (0, 1/2]
  DistributionSpec dist;
};

// Throws SpecError when invariants fail: weights positive and summing to 1,
// xi in [delta, 1-delta], y in [-1, 1], alpha > 0, delta in (0, 1/2],
// and xi = 1/2 for every atom of the PerturbedSRW variant.
void validate(const PerturbationSpec& spec);

// Exact law-level moments, computable in closed form from the atoms.
struct Moments {
  double lambda = 0.0;     // E[Y / (xi (1-xi))]
  double mean_zeta = 0.0;  // E[log(xi / (1-xi))]
  double s2 = 0.0;         // Var[xi]
  double sigma2 = 0.0;     // Var[Y]
  double mean_y = 0.0;     // E[Y]
  bool symmetric_balance = false;  // Y/xi and -Y/(1-xi) equal in law
};

Moments moments(const PerturbationSpec& spec);

enum class RegimeClass { Transient, NullRecurrent, Ergodic, Unknown };

const char* to_string(RegimeClass r);

// Recurrence regime dictated by the classification criteria; Unknown for
// every parameter corner the criteria leave open.
RegimeClass classify(const PerturbationSpec& spec);

// Hard cap on materialized prefixes (sites); ~1 GiB of doubles.
inline constexpr std::int64_t kMaxRealizedSites = std::int64_t(1) << 27;

// A realized quenched environment: deterministic map n -> p_n from
// (spec, seed). Immutable and cheap to copy; safe to share across threads.
class Environment {
 public:
  Environment(PerturbationSpec spec, std::uint64_t seed);

  // Environment with p_0..p_{n_max} materialized; site queries beyond the
  // prefix fall back to on-the-fly evaluation and agree exactly.
  static Environment realize(PerturbationSpec spec, std::uint64_t seed,
                             std::int64_t n_max);

  double site_prob(std::int64_t n) const {
    if (n == 0) return 0.5;
    if (prefix_ && n < static_cast<std::int64_t>(prefix_->size()))
      return (*prefix_)[static_cast<std::size_t>(n)];
    return compute_site(n);
  }

  // log(p_n / q_n); finite by ellipticity. Requires n >= 1.
  double log_ratio(std::int64_t n) const {
    const double p = site_prob(n);
    return std::log(p) - std::log1p(-p);
  }

  double ellipticity_delta() const { return spec_.delta; }
  const PerturbationSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t prefix_size() const {
    return prefix_ ? static_cast<std::int64_t>(prefix_->size()) : 0;
  }
  // Index past which the clamp in the site formula is provably inactive.
  std::int64_t clamp_inactive_after() const;

 private:
  double compute_site(std::int64_t n) const;

  PerturbationSpec spec_;
  std::uint64_t seed_ = 0;
  std::vector<double> cum_weight_;
  std::shared_ptr<const std::vector<double>> prefix_;
};

// Fixed jump-probability table, mainly for hand-built chains in tests and
// oracles. Sites beyond the table take the tail value.
class TableEnv {
 public:
  TableEnv(std::vector<double> p, double delta, double tail_value)
      : p_(std::move(p)), delta_(delta), tail_(tail_value) {}

  // Constant environment: p_0 = 1/2, p_n = p for n >= 1.
  static TableEnv constant(double p, double delta) {
    return TableEnv({0.5}, delta, p);
  }

  double site_prob(std::int64_t n) const {
    if (n < static_cast<std::int64_t>(p_.size()))
      return p_[static_cast<std::size_t>(n)];
    return tail_;
  }

  double log_ratio(std::int64_t n) const {
    const double p = site_prob(n);
    return std::log(p) - std::log1p(-p);
  }

  double ellipticity_delta() const { return delta_; }

  std::vector<double>& table() { return p_; }

 private:
  std::vector<double> p_;
  double delta_ = 0.5;
  double tail_ = 0.5;
};

}  // namespace rwre

#endif
