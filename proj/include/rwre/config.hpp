#ifndef RWRE_CONFIG_HPP
#define RWRE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rwre/envmodel.hpp"

namespace rwre {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment, fully described by a single JSON document. The master
// seed splits into environment and walk streams with fixed labels, so one
// quenched environment is reusable across walk seeds.
struct ExperimentConfig {
  PerturbationSpec spec;
  std::optional<std::uint64_t> env_seed;  // "seed" inside the spec object
  std::uint64_t master_seed = 1;
  std::int64_t n_max = 10000;
  std::uint64_t steps = 100000;
  std::int64_t replicates = 1;
  int env_seeds = 1;

  // Command-specific knobs, all optional in the JSON.
  std::string fit_mode = "free";     // "free" | "fixed"
  double gamma = 0.0;                // imposed exponent for fixed-mode fits
  std::int64_t fit_lo = -1, fit_hi = -1;
  double beta = 0.0;                 // envelope exponent
  double hypothesis = 0.0;           // envelope constant hypothesis
  std::vector<std::int64_t> sites;   // return-probability sites
  double tolerance = 1e-10;
  std::uint64_t step_cap = 1000000;
};

nlohmann::ordered_json spec_json(const PerturbationSpec& spec,
                                 std::optional<std::uint64_t> seed = {});
PerturbationSpec spec_from_json(const nlohmann::json& j,
                                std::optional<std::uint64_t>* seed_out = nullptr);

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Canonical serialization of the semantic fields; its hash identifies a run
// (worker count and output paths excluded by construction).
std::string canonical_config(const ExperimentConfig& cfg);

// Environment seed for environment index i under this config: the explicit
// spec seed for index 0 when present, otherwise derived from master_seed.
std::uint64_t env_seed_for(const ExperimentConfig& cfg, std::uint64_t index);

}  // namespace rwre

#endif
