#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qnet/common.hpp"
#include "qnet/integrate.hpp"
#include "qnet/json_util.hpp"
#include "qnet/lindblad.hpp"
#include "qnet/network.hpp"
#include "qnet/version.hpp"

namespace qnet {

enum class EngineKind {
  Harmonic,
  SemiclassicalJC,
  SemiclassicalBH,
  Quantum,
  Lindblad,
};

enum class ModelSelector { None, JC, BH };

inline std::string engine_name(EngineKind e) {
  switch (e) {
    case EngineKind::Harmonic: return "harmonic";
    case EngineKind::SemiclassicalJC: return "semiclassical-jc";
    case EngineKind::SemiclassicalBH: return "semiclassical-bh";
    case EngineKind::Quantum: return "quantum";
    case EngineKind::Lindblad: return "lindblad";
  }
  return "?";
}

// Fully resolved run description.  All rates and times are in units of J
// (J = 1 by default); omega_c is configurable mainly to set the scale of
// cavity-frequency disorder.
struct RunConfig {
  EngineKind engine = EngineKind::Harmonic;
  ModelSelector model = ModelSelector::None;

  int num_sites = 2;          // N
  double hopping = 1.0;       // J
  int initial_bosons = 10;    // Np
  Connectivity connectivity = Connectivity::all_to_all();
  DisorderSpec disorder;
  std::uint64_t seed = 0;

  double omega_c = 0.0;
  std::optional<double> omega_q;  // defaults to omega_c (resonant)
  double coupling_g = 0.0;        // g, JC engines
  double interaction_u = 0.0;     // U, BH engines
  std::optional<OpenSystemRates> rates;  // lindblad engine only

  IntegratorConfig integrator;
  double t_max = 50.0;
  int samples = 5000;
  std::optional<bool> sector;  // quantum engine: evolve in the M = Np sector
  std::size_t dimension_cap = ManyBodyBasis::kDefaultDimensionCap;
  std::size_t density_matrix_cap = 200;  // lindblad basis side length
  double z_floor = 1e-6;
  bool rotating_frame = true;  // evolve at frequencies relative to omega_c

  std::string out_dir = "out";
  std::optional<std::string> checkpoint_path;
  int threads = 0;

  bool is_jc() const {
    return engine == EngineKind::SemiclassicalJC ||
           model == ModelSelector::JC;
  }
  bool is_bh() const {
    return engine == EngineKind::SemiclassicalBH ||
           model == ModelSelector::BH;
  }
  bool needs_model_selector() const {
    return engine == EngineKind::Quantum || engine == EngineKind::Lindblad;
  }
  bool use_sector() const {
    return engine == EngineKind::Quantum && sector.value_or(true);
  }
  double resolved_omega_q() const { return omega_q.value_or(omega_c); }

  NetworkSpec network_spec() const {
    NetworkSpec spec;
    spec.num_sites = num_sites;
    spec.hopping = hopping;
    spec.connectivity = connectivity;
    spec.disorder = disorder;
    spec.seed = seed;
    return spec;
  }

  void validate() const {
    if (num_sites < 2) throw ConfigError("N", "must be >= 2");
    if (hopping < 0.0) throw ConfigError("J", "must be >= 0");
    if (initial_bosons < 1) throw ConfigError("Np", "must be >= 1");
    if (t_max <= 0.0) throw ConfigError("t_max", "must be > 0");
    if (samples < 2) throw ConfigError("samples", "must be >= 2");
    if (z_floor <= 0.0) throw ConfigError("z_floor", "must be > 0");
    try {
      disorder.validate();
    } catch (const std::exception& e) {
      throw ConfigError("disorder", e.what());
    }
    try {
      integrator.validate();
    } catch (const std::exception& e) {
      throw ConfigError("integrator", e.what());
    }

    if (needs_model_selector() && model == ModelSelector::None)
      throw ConfigError("model", "required for the " + engine_name(engine) +
                                     " engine ('jc' or 'bh')");
    if (!needs_model_selector() && model != ModelSelector::None)
      throw ConfigError("model",
                        "only valid for the quantum and lindblad engines");

    if (engine == EngineKind::Lindblad && !rates)
      throw ConfigError("rates", "required for the lindblad engine");
    if (engine != EngineKind::Lindblad && rates)
      throw ConfigError("rates", "only valid for the lindblad engine");
    if (rates) {
      try {
        rates->validate(is_jc());
      } catch (const std::exception& e) {
        throw ConfigError("rates", e.what());
      }
    }

    const bool jc_engine = is_jc();
    const bool bh_engine = is_bh();
    if (coupling_g != 0.0 && !jc_engine)
      throw ConfigError("g", "only valid for Jaynes-Cummings engines");
    if (interaction_u != 0.0 && !bh_engine)
      throw ConfigError("U", "only valid for Bose-Hubbard engines");
    if (omega_q && !jc_engine)
      throw ConfigError("omega_q", "only valid for Jaynes-Cummings engines");

    if (sector && engine != EngineKind::Quantum)
      throw ConfigError("sector", "sector evolution is only available for "
                                  "the closed quantum engine");
    if (checkpoint_path && engine != EngineKind::Quantum)
      throw ConfigError("checkpoint", "only the quantum engine writes "
                                      "state-vector checkpoints");
  }
};

inline EngineKind engine_from_string(const std::string& s) {
  if (s == "harmonic" || s == "harmonic-analytic") return EngineKind::Harmonic;
  if (s == "semiclassical-jc") return EngineKind::SemiclassicalJC;
  if (s == "semiclassical-bh") return EngineKind::SemiclassicalBH;
  if (s == "quantum") return EngineKind::Quantum;
  if (s == "lindblad") return EngineKind::Lindblad;
  throw ConfigError("engine", "unknown engine '" + s + "'");
}

/// Parses a config object in strict mode: unknown keys are rejected and every
/// error names the offending field.
inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  reject_unknown_keys(
      j,
      {"engine", "model", "N", "J", "Np", "connectivity", "disorder", "seed",
       "omega_c", "omega_q", "g", "U", "rates", "integrator", "t_max",
       "samples", "sector", "dimension_cap", "density_matrix_cap", "z_floor",
       "rotating_frame", "out", "checkpoint", "threads"},
      "");

  RunConfig cfg;
  if (!j.contains("engine")) throw ConfigError("engine", "missing");
  if (!j.at("engine").is_string())
    throw ConfigError("engine", "must be a string");
  cfg.engine = engine_from_string(j.at("engine").get<std::string>());

  if (j.contains("model")) {
    std::string m = j.at("model").get<std::string>();
    if (m == "jc")
      cfg.model = ModelSelector::JC;
    else if (m == "bh")
      cfg.model = ModelSelector::BH;
    else
      throw ConfigError("model", "must be 'jc' or 'bh'");
  }

  cfg.num_sites = static_cast<int>(number_or(j, "N", cfg.num_sites, ""));
  cfg.hopping = number_or(j, "J", cfg.hopping, "");
  cfg.initial_bosons =
      static_cast<int>(number_or(j, "Np", cfg.initial_bosons, ""));
  if (j.contains("connectivity"))
    cfg.connectivity =
        connectivity_from_json(j.at("connectivity"), "connectivity");
  if (j.contains("disorder")) {
    const auto& d = j.at("disorder");
    reject_unknown_keys(d, {"delta_omega", "delta_J"}, "disorder");
    cfg.disorder.delta_omega = number_or(d, "delta_omega", 0.0, "disorder");
    cfg.disorder.delta_hopping = number_or(d, "delta_J", 0.0, "disorder");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

  cfg.omega_c = number_or(j, "omega_c", cfg.omega_c, "");
  if (j.contains("omega_q")) cfg.omega_q = require_number(j, "omega_q", "");
  cfg.coupling_g = number_or(j, "g", 0.0, "");
  cfg.interaction_u = number_or(j, "U", 0.0, "");

  if (j.contains("rates")) {
    const auto& r = j.at("rates");
    reject_unknown_keys(r, {"kappa", "gamma", "gamma_phi"}, "rates");
    OpenSystemRates rates;
    rates.kappa = number_or(r, "kappa", 0.0, "rates");
    rates.gamma = number_or(r, "gamma", 0.0, "rates");
    rates.gamma_phi = number_or(r, "gamma_phi", 0.0, "rates");
    cfg.rates = rates;
  }

  if (j.contains("integrator")) {
    const auto& it = j.at("integrator");
    reject_unknown_keys(it, {"method", "dt", "rtol", "atol"}, "integrator");
    if (it.contains("method")) {
      std::string m = it.at("method").get<std::string>();
      if (m == "rk4")
        cfg.integrator.method = IntegratorConfig::Method::FixedRk4;
      else if (m == "rk45")
        cfg.integrator.method = IntegratorConfig::Method::AdaptiveRk45;
      else
        throw ConfigError("integrator.method", "must be 'rk4' or 'rk45'");
    }
    cfg.integrator.dt = number_or(it, "dt", cfg.integrator.dt, "integrator");
    cfg.integrator.rtol =
        number_or(it, "rtol", cfg.integrator.rtol, "integrator");
    cfg.integrator.atol =
        number_or(it, "atol", cfg.integrator.atol, "integrator");
  }

  cfg.t_max = number_or(j, "t_max", cfg.t_max, "");
  cfg.samples = static_cast<int>(number_or(j, "samples", cfg.samples, ""));
  if (j.contains("sector")) cfg.sector = j.at("sector").get<bool>();
  if (j.contains("dimension_cap"))
    cfg.dimension_cap = j.at("dimension_cap").get<std::size_t>();
  if (j.contains("density_matrix_cap"))
    cfg.density_matrix_cap = j.at("density_matrix_cap").get<std::size_t>();
  cfg.z_floor = number_or(j, "z_floor", cfg.z_floor, "");
  if (j.contains("rotating_frame"))
    cfg.rotating_frame = j.at("rotating_frame").get<bool>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("checkpoint"))
    cfg.checkpoint_path = j.at("checkpoint").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();

  cfg.validate();
  return cfg;
}

/// File values first, then flag overrides on top, then validation.
inline RunConfig parse_config(const nlohmann::json& file_json,
                              const nlohmann::json& overrides) {
  nlohmann::json merged =
      file_json.is_null() ? nlohmann::json::object() : file_json;
  if (!merged.is_object())
    throw ConfigError("config", "must be a JSON object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (it.key() == "disorder" || it.key() == "rates" ||
        it.key() == "integrator") {
      if (!merged.contains(it.key()) || !merged[it.key()].is_object())
        merged[it.key()] = nlohmann::json::object();
      for (auto inner = it->begin(); inner != it->end(); ++inner)
        merged[it.key()][inner.key()] = inner.value();
    } else {
      merged[it.key()] = it.value();
    }
  }
  return parse_config(merged);
}

/// Fully resolved echo of a config, embedded in every output artifact.
inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["engine"] = engine_name(cfg.engine);
  if (cfg.model == ModelSelector::JC) j["model"] = "jc";
  if (cfg.model == ModelSelector::BH) j["model"] = "bh";
  j["N"] = cfg.num_sites;
  j["J"] = cfg.hopping;
  j["Np"] = cfg.initial_bosons;
  j["connectivity"] = to_json(cfg.connectivity);
  j["disorder"] = {{"delta_omega", cfg.disorder.delta_omega},
                   {"delta_J", cfg.disorder.delta_hopping}};
  j["seed"] = cfg.seed;
  j["omega_c"] = cfg.omega_c;
  if (cfg.is_jc()) {
    j["omega_q"] = cfg.resolved_omega_q();
    j["g"] = cfg.coupling_g;
  }
  if (cfg.is_bh()) j["U"] = cfg.interaction_u;
  if (cfg.rates)
    j["rates"] = {{"kappa", cfg.rates->kappa},
                  {"gamma", cfg.rates->gamma},
                  {"gamma_phi", cfg.rates->gamma_phi}};
  j["integrator"] = {
      {"method", cfg.integrator.method == IntegratorConfig::Method::FixedRk4
                     ? "rk4"
                     : "rk45"},
      {"dt", cfg.integrator.dt},
      {"rtol", cfg.integrator.rtol},
      {"atol", cfg.integrator.atol}};
  j["t_max"] = cfg.t_max;
  j["samples"] = cfg.samples;
  if (cfg.engine == EngineKind::Quantum) j["sector"] = cfg.use_sector();
  j["dimension_cap"] = cfg.dimension_cap;
  if (cfg.engine == EngineKind::Lindblad)
    j["density_matrix_cap"] = cfg.density_matrix_cap;
  if (cfg.engine == EngineKind::Lindblad) j["z_floor"] = cfg.z_floor;
  j["rotating_frame"] = cfg.rotating_frame;
  j["version"] = QNET_VERSION;
  return j;
}

}  // namespace qnet
