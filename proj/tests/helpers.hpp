#ifndef RWRE_TESTS_HELPERS_HPP
#define RWRE_TESTS_HELPERS_HPP

#include <cstdint>
#include <vector>

#include "rwre/envmodel.hpp"
#include "rwre/rng.hpp"

namespace testutil {

inline rwre::PerturbationSpec single_atom(rwre::Variant v, double xi, double y,
                                          double alpha, double delta) {
  rwre::PerturbationSpec spec;
  spec.variant = v;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.dist.atoms = {{xi, y, 1.0}};
  return spec;
}

// Centred two-point base environment xi = 1/2 -+ a with constant shift y.
inline rwre::PerturbationSpec sinai_spec(double a, double y, double alpha,
                                         double delta = 0.2) {
  rwre::PerturbationSpec spec;
  spec.variant = rwre::Variant::PerturbedSinai;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.dist.atoms = {{0.5 - a, y, 0.5}, {0.5 + a, y, 0.5}};
  return spec;
}

inline rwre::PerturbationSpec srw_spec(std::vector<rwre::Atom> atoms,
                                       double alpha, double delta = 0.2) {
  rwre::PerturbationSpec spec;
  spec.variant = rwre::Variant::PerturbedSRW;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.dist.atoms = std::move(atoms);
  return spec;
}

// Deterministic family of random environments spanning both variants and
// all drift signs; index k fully determines the law and the seed.
inline rwre::Environment random_env(std::uint64_t k) {
  using namespace rwre;
  const std::uint64_t seed = rng::substream(0xACCE5507ULL, 0x7261ULL, k);
  if (k % 2 == 0) {
    const double a_vals[] = {0.10, 0.15, 0.20, 0.25};
    const double y_vals[] = {-0.5, -0.1, 0.0, 0.1, 0.5};
    const double alpha_vals[] = {0.2, 0.3, 0.6, 1.2};
    const double a = a_vals[(k / 2) % 4];
    const double y = y_vals[(k / 2) % 5];
    const double alpha = alpha_vals[(k / 2) % 4];
    return Environment(sinai_spec(a, y, alpha), seed);
  }
  const double b_vals[] = {0.1, 0.2, 0.3, 0.4};
  const double w_vals[] = {0.3, 0.5, 0.7};
  const double alpha_vals[] = {0.25, 0.5, 0.8, 1.5};
  const double b = b_vals[(k / 2) % 4];
  const double w = w_vals[(k / 2) % 3];
  const double alpha = alpha_vals[(k / 2) % 4];
  return Environment(
      srw_spec({{0.5, -b, w}, {0.5, b, 1.0 - w}}, alpha), seed);
}

}  // namespace testutil

#endif
