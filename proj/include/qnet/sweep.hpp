#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/config.hpp"
#include "qnet/engine.hpp"
#include "qnet/parallel.hpp"
#include "qnet/rng.hpp"

namespace qnet {

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

// Grid sweep over one or two parameters of a base run config, optionally
// with a disorder ensemble of R members per grid point.
struct SweepPlan {
  RunConfig base;
  std::vector<SweepAxis> axes;
  int ensemble_size = 1;  // R
  int threads = 0;

  void validate() const {
    base.validate();
    if (axes.empty() || axes.size() > 2)
      throw ConfigError("axes", "need one or two sweep axes");
    for (const auto& axis : axes)
      if (axis.values.empty())
        throw ConfigError("axes", "axis '" + axis.parameter + "' is empty");
    if (ensemble_size < 1) throw ConfigError("ensemble", "must be >= 1");
  }
};

struct SweepPoint {
  double eta_mean = std::numeric_limits<double>::quiet_NaN();
  double eta_min = std::numeric_limits<double>::quiet_NaN();
  double eta_max = std::numeric_limits<double>::quiet_NaN();
  int failures = 0;
  std::string error;
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  int ensemble_size = 1;
  std::vector<SweepPoint> points;  // row-major over (axes[0], axes[1])

  int rows() const { return static_cast<int>(axes[0].values.size()); }
  int cols() const {
    return axes.size() > 1 ? static_cast<int>(axes[1].values.size()) : 1;
  }
  const SweepPoint& at(int i0, int i1 = 0) const {
    return points[static_cast<std::size_t>(i0) * cols() + i1];
  }
};

/// Applies one named parameter to a run config.  Integer-valued parameters
/// are rounded; "D" switches the connectivity to finite range (canonicalized
/// to all-to-all once D reaches ceil(N/2)).
inline void apply_parameter(RunConfig& cfg, const std::string& name,
                            double value) {
  auto as_int = [&](double v) { return static_cast<int>(std::llround(v)); };
  if (name == "N")
    cfg.num_sites = as_int(value);
  else if (name == "Np")
    cfg.initial_bosons = as_int(value);
  else if (name == "J")
    cfg.hopping = value;
  else if (name == "D")
    cfg.connectivity = Connectivity::finite_range(as_int(value));
  else if (name == "g")
    cfg.coupling_g = value;
  else if (name == "U")
    cfg.interaction_u = value;
  else if (name == "omega_c")
    cfg.omega_c = value;
  else if (name == "omega_q")
    cfg.omega_q = value;
  else if (name == "t_max")
    cfg.t_max = value;
  else if (name == "samples")
    cfg.samples = as_int(value);
  else if (name == "delta_omega")
    cfg.disorder.delta_omega = value;
  else if (name == "delta_J")
    cfg.disorder.delta_hopping = value;
  else if (name == "kappa" || name == "gamma" || name == "gamma_phi") {
    if (!cfg.rates) cfg.rates = OpenSystemRates{};
    if (name == "kappa")
      cfg.rates->kappa = value;
    else if (name == "gamma")
      cfg.rates->gamma = value;
    else
      cfg.rates->gamma_phi = value;
  } else {
    throw ConfigError("axes", "unknown sweep parameter '" + name + "'");
  }
}

/// Executes every grid point (in parallel).  Point seeds derive from the base
/// seed plus grid indices plus the replicate index, so any subset of points
/// reproduces bitwise regardless of execution order or worker count.
/// Per-point failures are recorded, never fatal.
inline SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();

  SweepResult result;
  result.axes = plan.axes;
  result.ensemble_size = plan.ensemble_size;

  const std::size_t n0 = plan.axes[0].values.size();
  const std::size_t n1 = plan.axes.size() > 1 ? plan.axes[1].values.size() : 1;
  result.points.resize(n0 * n1);

  parallel_for(n0 * n1, resolve_thread_count(plan.threads), [&](std::size_t p) {
    const std::size_t i0 = p / n1;
    const std::size_t i1 = p % n1;
    SweepPoint& point = result.points[p];
    const auto started = std::chrono::steady_clock::now();

    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    int ok = 0;

    for (int r = 0; r < plan.ensemble_size; ++r) {
      try {
        RunConfig cfg = plan.base;
        apply_parameter(cfg, plan.axes[0].parameter, plan.axes[0].values[i0]);
        if (plan.axes.size() > 1)
          apply_parameter(cfg, plan.axes[1].parameter, plan.axes[1].values[i1]);
        cfg.seed = derive_seed(plan.base.seed,
                               {static_cast<std::uint64_t>(i0),
                                static_cast<std::uint64_t>(i1),
                                static_cast<std::uint64_t>(r)});
        cfg.validate();
        const RunResult run = run_single(cfg);
        sum += run.summary.eta;
        lo = std::min(lo, run.summary.eta);
        hi = std::max(hi, run.summary.eta);
        ++ok;
      } catch (const std::exception& e) {
        ++point.failures;
        if (point.error.empty()) point.error = e.what();
      }
    }
    if (ok > 0) {
      point.eta_mean = sum / ok;
      point.eta_min = lo;
      point.eta_max = hi;
    }
    point.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
  });

  return result;
}

/// eta(D) curves of the semiclassical Bose-Hubbard network for several U,
/// packaged as a 2-axis sweep (D rows, U columns).
inline SweepResult connectivity_scan_bh(const RunConfig& base,
                                        const std::vector<double>& d_values,
                                        const std::vector<double>& u_values,
                                        int threads = 0) {
  SweepPlan plan;
  plan.base = base;
  plan.base.engine = EngineKind::SemiclassicalBH;
  plan.base.model = ModelSelector::None;
  plan.axes = {{"D", d_values}, {"U", u_values}};
  plan.threads = threads;
  return run_sweep(plan);
}

// --- serialization -----------------------------------------------------------

/// eta-mean matrix with row/column headers (first column = axis 0 values,
/// header row = axis 1 values; single data column for 1-D sweeps).
inline std::string sweep_matrix_csv(const SweepResult& result,
                                    int which = 0 /*0 mean,1 min,2 max*/) {
  std::string out = result.axes[0].parameter;
  if (result.axes.size() > 1) {
    for (double v : result.axes[1].values) {
      out += "," + result.axes[1].parameter + "=" + format_roundtrip(v);
    }
  } else {
    out += ",eta";
  }
  out += "\n";
  for (int i0 = 0; i0 < result.rows(); ++i0) {
    out += format_roundtrip(result.axes[0].values[i0]);
    for (int i1 = 0; i1 < result.cols(); ++i1) {
      const SweepPoint& p = result.at(i0, i1);
      const double v =
          which == 0 ? p.eta_mean : (which == 1 ? p.eta_min : p.eta_max);
      out += ",";
      out += format_roundtrip(v);
    }
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json sweep_metadata_json(const SweepPlan& plan,
                                                  const SweepResult& result) {
  nlohmann::ordered_json j;
  j["engine"] = engine_name(plan.base.engine);
  j["base_seed"] = plan.base.seed;
  j["ensemble"] = plan.ensemble_size;
  j["version"] = QNET_VERSION;
  j["base_config"] = to_json(plan.base);
  auto axes = nlohmann::ordered_json::array();
  for (const auto& axis : result.axes)
    axes.push_back({{"parameter", axis.parameter}, {"values", axis.values}});
  j["axes"] = axes;
  auto failures = nlohmann::ordered_json::array();
  auto wall = nlohmann::ordered_json::array();
  for (int i0 = 0; i0 < result.rows(); ++i0) {
    for (int i1 = 0; i1 < result.cols(); ++i1) {
      const SweepPoint& p = result.at(i0, i1);
      wall.push_back(p.wall_ms);
      if (p.failures > 0)
        failures.push_back({{"row", i0},
                            {"col", i1},
                            {"count", p.failures},
                            {"error", p.error}});
    }
  }
  j["failures"] = failures;
  j["wall_ms_per_point"] = wall;
  return j;
}

/// Writes eta.csv (+ eta_min/eta_max for ensembles) and sweep.json.
inline void write_sweep_artifacts(const std::string& out_dir,
                                  const SweepPlan& plan,
                                  const SweepResult& result) {
  ensure_directory(out_dir);
  write_text_file(out_dir + "/eta.csv", sweep_matrix_csv(result, 0));
  if (plan.ensemble_size > 1) {
    write_text_file(out_dir + "/eta_min.csv", sweep_matrix_csv(result, 1));
    write_text_file(out_dir + "/eta_max.csv", sweep_matrix_csv(result, 2));
  }
  write_json_file(out_dir + "/sweep.json", sweep_metadata_json(plan, result));
}

/// Sweep plan from JSON: {"base": {...run config...}, "axes":
/// [{"parameter": "g", "values": [...]}, ...], "ensemble": R}.
inline SweepPlan sweep_plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep", "must be a JSON object");
  reject_unknown_keys(j, {"base", "axes", "ensemble", "threads"}, "");
  if (!j.contains("base")) throw ConfigError("base", "missing");
  if (!j.contains("axes")) throw ConfigError("axes", "missing");

  SweepPlan plan;
  plan.base = parse_config(j.at("base"));
  if (!j.at("axes").is_array()) throw ConfigError("axes", "must be an array");
  for (const auto& a : j.at("axes")) {
    reject_unknown_keys(a, {"parameter", "values"}, "axes");
    SweepAxis axis;
    if (!a.contains("parameter") || !a.at("parameter").is_string())
      throw ConfigError("axes.parameter", "missing or not a string");
    axis.parameter = a.at("parameter").get<std::string>();
    if (!a.contains("values") || !a.at("values").is_array())
      throw ConfigError("axes.values", "missing or not an array");
    for (const auto& v : a.at("values")) axis.values.push_back(v.get<double>());
    plan.axes.push_back(std::move(axis));
  }
  if (j.contains("ensemble")) plan.ensemble_size = j.at("ensemble").get<int>();
  if (j.contains("threads")) plan.threads = j.at("threads").get<int>();
  plan.validate();
  return plan;
}

}  // namespace qnet
