#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/config.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/harmonic.hpp"
#include "qnet/io.hpp"
#include "qnet/lindblad.hpp"
#include "qnet/model.hpp"
#include "qnet/network.hpp"
#include "qnet/quantum.hpp"
#include "qnet/semiclassical.hpp"
#include "qnet/version.hpp"

namespace qnet {

inline std::vector<double> make_time_grid(double t_max, int samples) {
  std::vector<double> times(samples);
  const double step = t_max / (samples - 1);
  for (int i = 0; i < samples; ++i) times[i] = i * step;
  times.back() = t_max;
  return times;
}

struct RunResult {
  Trajectory trajectory;
  LocalizationSummary summary;
  nlohmann::ordered_json summary_json;
};

namespace detail {

/// Onsite cavity frequency entering the equations of motion.  Occupations are
/// invariant under a global frame rotation, so by default everything evolves
/// in the frame rotating at omega_c and only disorder shifts survive on the
/// diagonal; omega_q is measured relative to the same frame.
inline double frame_omega_c(const RunConfig& cfg) {
  return cfg.rotating_frame ? 0.0 : cfg.omega_c;
}

inline double frame_omega_q(const RunConfig& cfg) {
  return cfg.rotating_frame ? cfg.resolved_omega_q() - cfg.omega_c
                            : cfg.resolved_omega_q();
}

inline UnitModel unit_model(const RunConfig& cfg) {
  const double wc = frame_omega_c(cfg);
  switch (cfg.engine) {
    case EngineKind::Harmonic:
      return HarmonicModel{wc};
    case EngineKind::SemiclassicalJC:
      return JaynesCummingsModel{wc, frame_omega_q(cfg), cfg.coupling_g};
    case EngineKind::SemiclassicalBH:
      return BoseHubbardModel{wc, cfg.interaction_u};
    case EngineKind::Quantum:
    case EngineKind::Lindblad:
      if (cfg.model == ModelSelector::JC)
        return JaynesCummingsModel{wc, frame_omega_q(cfg), cfg.coupling_g};
      return BoseHubbardModel{wc, cfg.interaction_u};
  }
  return HarmonicModel{wc};
}

}  // namespace detail

/// Executes one run.  The config must already be validated.
inline RunResult run_single(const RunConfig& cfg) {
  const NetworkSpec net = cfg.network_spec();
  SplitMix64 rng(cfg.seed);
  const DisorderRealization realization = sample_disorder(net, rng);
  const UnitModel model = detail::unit_model(cfg);
  const Eigen::MatrixXcd h_single =
      single_particle_hamiltonian(net, model_omega_c(model), realization);
  const double np = cfg.initial_bosons;

  // harmonic all-to-all: force the window over at least one full revival
  // period so the sampled minimum is the true one
  double window = cfg.t_max;
  if (cfg.engine == EngineKind::Harmonic &&
      cfg.connectivity.is_all_to_all_for(cfg.num_sites) && cfg.hopping > 0.0)
    window = std::max(window, all_to_all_period(cfg.num_sites, cfg.hopping));
  const std::vector<double> times = make_time_grid(window, cfg.samples);

  RunResult result;
  bool refined_minimum = false;

  switch (cfg.engine) {
    case EngineKind::Harmonic: {
      CorrelationPropagator prop(h_single);
      result.trajectory = harmonic_trajectory(h_single, np, times);
      result.summary = eta_from_trajectory(result.trajectory, np);
      // the propagator evaluates P(t) at arbitrary t, so the grid minimum can
      // be sharpened to machine precision
      auto p_of_t = [&](double t) { return prop.imbalance(np, t); };
      std::size_t arg = std::min_element(result.trajectory.imbalance.begin(),
                                         result.trajectory.imbalance.end()) -
                        result.trajectory.imbalance.begin();
      const double t_lo = times[arg > 0 ? arg - 1 : 0];
      const double t_hi = times[std::min(arg + 1, times.size() - 1)];
      double t_best = result.summary.t_at_min;
      const double p_ref = refine_imbalance_minimum(p_of_t, t_lo, t_hi, &t_best);
      if (p_ref < result.summary.p_min) {
        result.summary.p_min = p_ref;
        result.summary.t_at_min = t_best;
        result.summary.eta =
            std::clamp((np + p_ref) / (2.0 * np), 0.0, 1.0);
      }
      refined_minimum = true;
      break;
    }
    case EngineKind::SemiclassicalJC: {
      result.trajectory =
          simulate_jc(h_single, detail::frame_omega_q(cfg), cfg.coupling_g, np,
                      times, cfg.integrator);
      result.summary = eta_from_trajectory(result.trajectory, np);
      break;
    }
    case EngineKind::SemiclassicalBH: {
      result.trajectory = simulate_bh(h_single, cfg.interaction_u, np, times,
                                      cfg.integrator);
      result.summary = eta_from_trajectory(result.trajectory, np);
      break;
    }
    case EngineKind::Quantum: {
      const ModelKind kind = model_kind(model);
      ManyBodyBasis basis =
          cfg.use_sector()
              ? build_basis(cfg.num_sites, cfg.initial_bosons, kind,
                            cfg.initial_bosons, cfg.dimension_cap)
              : build_basis(cfg.num_sites, cfg.initial_bosons, kind,
                            std::nullopt, cfg.dimension_cap);
      SparseHamiltonian h = assemble_hamiltonian(basis, model, h_single);
      Eigen::VectorXcd psi0 = initial_fock_state(basis, 0, cfg.initial_bosons);
      Eigen::VectorXcd psi_final;
      result.trajectory = evolve(h, basis, psi0, times, EvolveOptions{},
                                 cfg.checkpoint_path ? &psi_final : nullptr);
      result.summary = eta_from_trajectory(result.trajectory, np);
      if (cfg.checkpoint_path)
        write_state_checkpoint(*cfg.checkpoint_path, psi_final);
      break;
    }
    case EngineKind::Lindblad: {
      const ModelKind kind = model_kind(model);
      // no drive and zero temperature: nothing ever climbs above the initial
      // excitation number, so the downward-closed space M <= Np is exact
      ManyBodyBasis basis = ManyBodyBasis::build(
          cfg.num_sites, cfg.initial_bosons,
          kind == ModelKind::JaynesCummings, BasisTruncation::MaxTotal,
          cfg.initial_bosons, cfg.density_matrix_cap);
      SparseHamiltonian h = assemble_hamiltonian(basis, model, h_single);
      Eigen::MatrixXcd rho0 =
          DensityMatrix::pure(initial_fock_state(basis, 0, cfg.initial_bosons))
              .mat;
      LindbladPropagator prop(basis, h, *cfg.rates);
      result.trajectory =
          prop.evolve(rho0, times, cfg.integrator.dt, cfg.z_floor);
      result.summary = eta_from_trajectory(result.trajectory, np);
      break;
    }
  }

  nlohmann::ordered_json summary;
  summary["eta"] = result.summary.eta;
  summary["P_min"] = result.summary.p_min;
  summary["t_at_min"] = result.summary.t_at_min;
  summary["window_t_max"] = result.summary.window_t_max;
  summary["Np"] = np;
  summary["refined_minimum"] = refined_minimum;
  summary["drift"] = result.trajectory.drift;
  summary["seed"] = cfg.seed;
  summary["version"] = QNET_VERSION;
  summary["config"] = to_json(cfg);
  result.summary_json = summary;
  return result;
}

/// Runs and writes trajectory.csv + summary.json under cfg.out_dir.
inline RunResult run_and_write(const RunConfig& cfg) {
  RunResult result = run_single(cfg);
  ensure_directory(cfg.out_dir);
  write_trajectory_csv(cfg.out_dir + "/trajectory.csv", result.trajectory);
  write_json_file(cfg.out_dir + "/summary.json", result.summary_json);
  return result;
}

}  // namespace qnet
