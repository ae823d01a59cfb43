#include "rwre/config.hpp"

#include <fstream>

namespace rwre {

namespace {

const char* variant_name(Variant v) {
  return v == Variant::PerturbedSinai ? "perturbed_sinai" : "perturbed_srw";
}

Variant variant_from(const std::string& s) {
  if (s == "perturbed_sinai") return Variant::PerturbedSinai;
  if (s == "perturbed_srw") return Variant::PerturbedSRW;
  throw ConfigError("unknown variant: " + s);
}

}  // namespace

nlohmann::ordered_json spec_json(const PerturbationSpec& spec,
                                 std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(spec.variant);
  j["alpha"] = spec.alpha;
  j["delta"] = spec.delta;
  auto atoms = nlohmann::ordered_json::array();
  for (const Atom& a : spec.dist.atoms)
    atoms.push_back({a.xi, a.y, a.weight});
  j["atoms"] = atoms;
  if (seed) j["seed"] = *seed;
  return j;
}

PerturbationSpec spec_from_json(const nlohmann::json& j,
                                std::optional<std::uint64_t>* seed_out) {
  try {
    PerturbationSpec spec;
    spec.variant = variant_from(j.at("variant").get<std::string>());
    spec.alpha = j.at("alpha").get<double>();
    spec.delta = j.at("delta").get<double>();
    for (const auto& row : j.at("atoms")) {
      if (!row.is_array() || row.size() != 3)
        throw ConfigError("atom rows must be [xi, y, weight]");
      spec.dist.atoms.push_back({row[0].get<double>(), row[1].get<double>(),
                                 row[2].get<double>()});
    }
    if (seed_out) {
      if (j.contains("seed"))
        *seed_out = j.at("seed").get<std::uint64_t>();
      else
        *seed_out = std::nullopt;
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad spec JSON: ") + e.what());
  } catch (const SpecError& e) {
    throw ConfigError(std::string("invalid spec: ") + e.what());
  }
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["spec"] = spec_json(cfg.spec, cfg.env_seed);
  j["master_seed"] = cfg.master_seed;
  j["n_max"] = cfg.n_max;
  j["steps"] = cfg.steps;
  j["replicates"] = cfg.replicates;
  j["env_seeds"] = cfg.env_seeds;
  j["fit_mode"] = cfg.fit_mode;
  j["gamma"] = cfg.gamma;
  j["fit_lo"] = cfg.fit_lo;
  j["fit_hi"] = cfg.fit_hi;
  j["beta"] = cfg.beta;
  j["hypothesis"] = cfg.hypothesis;
  j["sites"] = cfg.sites;
  j["tolerance"] = cfg.tolerance;
  j["step_cap"] = cfg.step_cap;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    std::optional<std::uint64_t> seed;
    cfg.spec = spec_from_json(j.at("spec"), &seed);
    cfg.env_seed = seed;
    if (j.contains("master_seed"))
      cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<std::int64_t>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<std::uint64_t>();
    if (j.contains("replicates"))
      cfg.replicates = j.at("replicates").get<std::int64_t>();
    if (j.contains("env_seeds")) cfg.env_seeds = j.at("env_seeds").get<int>();
    if (j.contains("fit_mode"))
      cfg.fit_mode = j.at("fit_mode").get<std::string>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("fit_lo")) cfg.fit_lo = j.at("fit_lo").get<std::int64_t>();
    if (j.contains("fit_hi")) cfg.fit_hi = j.at("fit_hi").get<std::int64_t>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("hypothesis"))
      cfg.hypothesis = j.at("hypothesis").get<double>();
    if (j.contains("sites"))
      cfg.sites = j.at("sites").get<std::vector<std::int64_t>>();
    if (j.contains("tolerance"))
      cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("step_cap"))
      cfg.step_cap = j.at("step_cap").get<std::uint64_t>();
    if (cfg.n_max <= 0 || cfg.replicates < 1 || cfg.env_seeds < 1)
      throw ConfigError("budgets must be positive and replicates >= 1");
    if (cfg.fit_mode != "free" && cfg.fit_mode != "fixed")
      throw ConfigError("fit_mode must be \"free\" or \"fixed\"");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  return config_from_json(j);
}

std::string canonical_config(const ExperimentConfig& cfg) {
  return config_json(cfg).dump();
}

std::uint64_t env_seed_for(const ExperimentConfig& cfg, std::uint64_t index) {
  if (cfg.env_seed && index == 0) return *cfg.env_seed;
  return rng::substream(cfg.master_seed, rng::kEnvStream, index);
}

}  // namespace rwre
