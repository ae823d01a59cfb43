#include "rwre/envmodel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rwre {

namespace {

constexpr double kZeroTol = 1e-12;

// Induced finite distribution: values with merged weights, values equal
// within kZeroTol collapsed to one support point.
std::vector<std::pair<double, double>> induced(
    const std::vector<Atom>& atoms, bool left_side) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(atoms.size());
  for (const Atom& a : atoms) {
    const double v = left_side ? a.y / a.xi : -a.y / (1.0 - a.xi);
    pts.emplace_back(v, a.weight);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [v, w] : pts) {
    if (!merged.empty() && std::abs(v - merged.back().first) <= kZeroTol)
      merged.back().second += w;
    else
      merged.emplace_back(v, w);
  }
  return merged;
}

}  // namespace

void validate(const PerturbationSpec& spec) {
  if (!(spec.alpha > 0.0)) throw SpecError("alpha must be positive");
  if (!(spec.delta > 0.0 && spec.delta <= 0.5))
    throw SpecError("delta must lie in (0, 1/2]");
  if (spec.dist.atoms.empty()) throw SpecError("distribution has no atoms");
  double total = 0.0;
  for (const Atom& a : spec.dist.atoms) {
    if (!(a.weight > 0.0)) throw SpecError("atom weights must be positive");
    total += a.weight;
    if (a.xi < spec.delta - kZeroTol || a.xi > 1.0 - spec.delta + kZeroTol)
      throw SpecError("xi outside [delta, 1-delta]");
    if (a.y < -1.0 || a.y > 1.0) throw SpecError("y outside [-1, 1]");
    if (spec.variant == Variant::PerturbedSRW && std::abs(a.xi - 0.5) > kZeroTol)
      throw SpecError("PerturbedSRW requires xi = 1/2 on every atom");
  }
  if (std::abs(total - 1.0) > kZeroTol)
    throw SpecError("atom weights must sum to 1");
}

Moments moments(const PerturbationSpec& spec) {
  Moments m;
  double e_xi = 0.0, e_xi2 = 0.0, e_y2 = 0.0;
  for (const Atom& a : spec.dist.atoms) {
    const double w = a.weight;
    m.lambda += w * a.y / (a.xi * (1.0 - a.xi));
    m.mean_zeta += w * (std::log(a.xi) - std::log1p(-a.xi));
    m.mean_y += w * a.y;
    e_xi += w * a.xi;
    e_xi2 += w * a.xi * a.xi;
    e_y2 += w * a.y * a.y;
  }
  m.s2 = std::max(0.0, e_xi2 - e_xi * e_xi);
  m.sigma2 = std::max(0.0, e_y2 - m.mean_y * m.mean_y);

  const auto lhs = induced(spec.dist.atoms, true);
  const auto rhs = induced(spec.dist.atoms, false);
  m.symmetric_balance = lhs.size() == rhs.size();
  if (m.symmetric_balance) {
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (std::abs(lhs[i].first - rhs[i].first) > kZeroTol ||
          std::abs(lhs[i].second - rhs[i].second) > kZeroTol) {
        m.symmetric_balance = false;
        break;
      }
    }
  }
  return m;
}

const char* to_string(RegimeClass r) {
  switch (r) {
    case RegimeClass::Transient: return "transient";
    case RegimeClass::NullRecurrent: return "null_recurrent";
    case RegimeClass::Ergodic: return "ergodic";
    case RegimeClass::Unknown: return "unknown";
  }
  return "unknown";
}

RegimeClass classify(const PerturbationSpec& spec) {
  validate(spec);
  const Moments m = moments(spec);

  if (spec.variant == Variant::PerturbedSRW) {
    // Symmetric perturbation (including the degenerate Y = 0 walk) is
    // null-recurrent for every alpha > 0.
    if (m.symmetric_balance) return RegimeClass::NullRecurrent;
    if (std::abs(m.mean_y) <= kZeroTol) return RegimeClass::Unknown;
    if (m.sigma2 <= kZeroTol) return RegimeClass::Unknown;  // deterministic Y
    if (spec.alpha < 1.0)
      return m.mean_y > 0.0 ? RegimeClass::Ergodic : RegimeClass::Transient;
    if (spec.alpha > 1.0) return RegimeClass::NullRecurrent;
    return RegimeClass::Unknown;  // alpha = 1 left open
  }

  // PerturbedSinai: the criteria assume a centred, truly random base
  // environment; outside that they are silent.
  if (std::abs(m.mean_zeta) > kZeroTol) return RegimeClass::Unknown;
  if (m.s2 <= kZeroTol) return RegimeClass::Unknown;
  if (m.symmetric_balance) return RegimeClass::NullRecurrent;
  if (std::abs(m.lambda) <= kZeroTol) return RegimeClass::Unknown;
  if (spec.alpha >= 0.5) return RegimeClass::NullRecurrent;
  return m.lambda > 0.0 ? RegimeClass::Ergodic : RegimeClass::Transient;
}

Environment::Environment(PerturbationSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
  validate(spec_);
  cum_weight_.reserve(spec_.dist.atoms.size());
  double c = 0.0;
  for (const Atom& a : spec_.dist.atoms) {
    c += a.weight;
    cum_weight_.push_back(c);
  }
  cum_weight_.back() = 1.0;
}

Environment Environment::realize(PerturbationSpec spec, std::uint64_t seed,
                                 std::int64_t n_max) {
  if (n_max < 0) throw SpecError("n_max must be nonnegative");
  if (n_max + 1 > kMaxRealizedSites)
    throw ResourceError("materialized prefix exceeds the memory budget");
  Environment env(std::move(spec), seed);
  auto table = std::make_shared<std::vector<double>>();
  table->reserve(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t n = 0; n <= n_max; ++n)
    table->push_back(n == 0 ? 0.5 : env.compute_site(n));
  env.prefix_ = std::move(table);
  return env;
}

double Environment::compute_site(std::int64_t n) const {
  const double u = rng::uniform01(rng::at(seed_, static_cast<std::uint64_t>(n)));
  std::size_t k = 0;
  while (k + 1 < cum_weight_.size() && u >= cum_weight_[k]) ++k;
  const Atom& a = spec_.dist.atoms[k];
  const double raw =
      a.xi + a.y * std::pow(static_cast<double>(n), -spec_.alpha);
  const double lo = spec_.delta / 2.0;
  const double hi = 1.0 - spec_.delta / 2.0;
  if (raw < lo) return lo;
  if (raw > hi) return hi;
  return raw;
}

std::int64_t Environment::clamp_inactive_after() const {
  // |Y| <= 1, so past (2/delta)^{1/alpha} the perturbed value stays inside
  // [delta/2, 1-delta/2].
  const double n_star = std::pow(2.0 / spec_.delta, 1.0 / spec_.alpha);
  return static_cast<std::int64_t>(std::ceil(n_star)) + 1;
}

}  // namespace rwre
