// qnet command-line front end: single runs, parameter sweeps, config
// validation, and the built-in cross-check suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnet/qnet.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> engine, model, out, checkpoint;
  std::optional<std::int64_t> seed;
  std::optional<double> t_max, j_hop, g, u, omega_c, omega_q, kappa, gamma,
      gamma_phi, delta_omega, delta_j, dt;
  std::optional<int> samples, threads, n_sites, np, range_d;
  bool all_to_all = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--engine", f.engine,
                  "harmonic | semiclassical-jc | semiclassical-bh | quantum | "
                  "lindblad");
  cmd->add_option("--model", f.model, "jc | bh (quantum / lindblad engines)");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--t-max", f.t_max, "observation window (units of 1/J)");
  cmd->add_option("--samples", f.samples, "trajectory sample count");
  cmd->add_option("--threads", f.threads, "worker cap (QNET_THREADS fallback)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--checkpoint", f.checkpoint, "state-vector checkpoint path");
  cmd->add_option("--N", f.n_sites, "number of units");
  cmd->add_option("--Np", f.np, "initial bosons in the test unit");
  cmd->add_option("--J", f.j_hop, "hopping rate");
  cmd->add_option("--g", f.g, "cavity-qubit coupling");
  cmd->add_option("--U", f.u, "onsite attraction");
  cmd->add_option("--omega-c", f.omega_c, "cavity frequency (units of J)");
  cmd->add_option("--omega-q", f.omega_q, "qubit gap (units of J)");
  cmd->add_option("--kappa", f.kappa, "cavity dissipation rate");
  cmd->add_option("--gamma", f.gamma, "qubit decay rate");
  cmd->add_option("--gamma-phi", f.gamma_phi, "qubit dephasing rate");
  cmd->add_option("--D", f.range_d, "finite connectivity range");
  cmd->add_flag("--all-to-all", f.all_to_all, "all-to-all connectivity");
  cmd->add_option("--delta-omega", f.delta_omega,
                  "cavity-frequency disorder half-width");
  cmd->add_option("--delta-J", f.delta_j, "hopping disorder half-width");
  cmd->add_option("--dt", f.dt, "fixed integrator step");
}

json overrides_json(const CommonFlags& f) {
  json o = json::object();
  if (f.engine) o["engine"] = *f.engine;
  if (f.model) o["model"] = *f.model;
  if (f.seed) o["seed"] = *f.seed;
  if (f.t_max) o["t_max"] = *f.t_max;
  if (f.samples) o["samples"] = *f.samples;
  if (f.threads) o["threads"] = *f.threads;
  if (f.out) o["out"] = *f.out;
  if (f.checkpoint) o["checkpoint"] = *f.checkpoint;
  if (f.n_sites) o["N"] = *f.n_sites;
  if (f.np) o["Np"] = *f.np;
  if (f.j_hop) o["J"] = *f.j_hop;
  if (f.g) o["g"] = *f.g;
  if (f.u) o["U"] = *f.u;
  if (f.omega_c) o["omega_c"] = *f.omega_c;
  if (f.omega_q) o["omega_q"] = *f.omega_q;
  if (f.range_d) o["connectivity"] = {{"type", "finite_range"}, {"D", *f.range_d}};
  if (f.all_to_all) o["connectivity"] = {{"type", "all_to_all"}};
  if (f.delta_omega) o["disorder"]["delta_omega"] = *f.delta_omega;
  if (f.delta_j) o["disorder"]["delta_J"] = *f.delta_j;
  if (f.kappa) o["rates"]["kappa"] = *f.kappa;
  if (f.gamma) o["rates"]["gamma"] = *f.gamma;
  if (f.gamma_phi) o["rates"]["gamma_phi"] = *f.gamma_phi;
  if (f.dt) o["integrator"]["dt"] = *f.dt;
  return o;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json j;
  in >> j;
  return j;
}

qnet::RunConfig resolve_config(const CommonFlags& f) {
  json file = json::object();
  if (!f.config_path.empty()) file = load_json_file(f.config_path);
  return qnet::parse_config(file, overrides_json(f));
}

int fail(const std::exception& e) {
  std::string field;
  if (const auto* ce = dynamic_cast<const qnet::ConfigError*>(&e))
    field = ce->field;
  std::cout << qnet::error_json(e.what(), field).dump(2) << std::endl;
  std::cerr << "error: " << e.what() << std::endl;
  return 1;
}

// --- oracle suites -----------------------------------------------------------
// Library-vs-library consistency checks runnable from the command line.

bool oracle_analytic_vs_matrix() {
  using namespace qnet;
  double worst = 0.0;
  for (int n = 2; n <= 12; ++n) {
    NetworkSpec spec;
    spec.num_sites = n;
    spec.hopping = 1.0;
    for (int d = 0; d <= half_ceil(n) - 1; ++d) {
      const bool a2a = (d == 0);  // d = 0 slot runs the all-to-all form
      spec.connectivity =
          a2a ? Connectivity::all_to_all() : Connectivity::finite_range(d);
      CorrelationPropagator prop(single_particle_hamiltonian(
          spec, 0.0, DisorderRealization::clean(n)));
      HarmonicParams params{n, spec.connectivity, 1.0, 0.0, 10};
      std::optional<FiniteRangeImbalance> finite;
      if (!a2a) finite.emplace(params);
      for (int s = 0; s <= 100; ++s) {
        const double t = 20.0 * s / 100.0;
        const double closed =
            a2a ? imbalance_all_to_all(params, t) : (*finite)(t);
        worst = std::max(worst, std::abs(closed - prop.imbalance(10.0, t)));
      }
    }
  }
  std::printf("  analytic vs correlation matrix: max |dP| = %.3e (tol 1e-8)\n",
              worst);
  return worst < 1e-8;
}

bool oracle_sector_equivalence() {
  using namespace qnet;
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::JaynesCummings, ModelKind::BoseHubbard}) {
    const int n = 2, np = 3;
    NetworkSpec spec;
    spec.num_sites = n;
    auto h_single =
        single_particle_hamiltonian(spec, 0.0, DisorderRealization::clean(n));
    UnitModel model = kind == ModelKind::JaynesCummings
                          ? UnitModel(JaynesCummingsModel{0.0, 0.0, 0.7})
                          : UnitModel(BoseHubbardModel{0.0, 0.9});
    auto full = build_basis(n, np, kind);
    auto sector = build_basis(n, np, kind, np);
    auto h_full = assemble_hamiltonian(full, model, h_single);
    auto h_sector = assemble_hamiltonian(sector, model, h_single);
    auto times = make_time_grid(10.0, 101);
    auto traj_full =
        evolve(h_full, full, initial_fock_state(full, 0, np), times);
    auto traj_sector =
        evolve(h_sector, sector, initial_fock_state(sector, 0, np), times);
    for (std::size_t s = 0; s < times.size(); ++s)
      worst = std::max(worst, std::abs(traj_full.imbalance[s] -
                                       traj_sector.imbalance[s]));
  }
  std::printf("  sector vs full space:           max |dP| = %.3e (tol 1e-10)\n",
              worst);
  return worst < 1e-10;
}

bool oracle_linear_limits() {
  using namespace qnet;
  const int n = 3, np = 4;
  NetworkSpec spec;
  spec.num_sites = n;
  auto h_single =
      single_particle_hamiltonian(spec, 0.0, DisorderRealization::clean(n));
  HarmonicParams params{n, Connectivity::all_to_all(), 1.0, 0.0, np};
  auto times = make_time_grid(20.0, 401);

  IntegratorConfig cfg;
  auto traj_jc = simulate_jc(h_single, 0.0, 0.0, np, times, cfg);
  auto traj_bh = simulate_bh(h_single, 0.0, np, times, cfg);

  auto basis_jc = build_basis(n, np, ModelKind::JaynesCummings, np);
  auto basis_bh = build_basis(n, np, ModelKind::BoseHubbard, np);
  auto hq_jc = assemble_hamiltonian(basis_jc,
                                    JaynesCummingsModel{0.0, 0.0, 0.0},
                                    h_single);
  auto hq_bh =
      assemble_hamiltonian(basis_bh, BoseHubbardModel{0.0, 0.0}, h_single);
  auto traj_qjc =
      evolve(hq_jc, basis_jc, initial_fock_state(basis_jc, 0, np), times);
  auto traj_qbh =
      evolve(hq_bh, basis_bh, initial_fock_state(basis_bh, 0, np), times);

  double worst = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double exact = imbalance_all_to_all(params, times[s]);
    worst = std::max(worst, std::abs(traj_jc.imbalance[s] - exact));
    worst = std::max(worst, std::abs(traj_bh.imbalance[s] - exact));
    worst = std::max(worst, std::abs(traj_qjc.imbalance[s] - exact));
    worst = std::max(worst, std::abs(traj_qbh.imbalance[s] - exact));
  }
  std::printf("  linear-limit reductions:        max |dP| = %.3e (tol 1e-6)\n",
              worst);
  return worst < 1e-6;
}

int run_oracle() {
  struct Suite {
    const char* name;
    bool (*fn)();
  };
  const Suite suites[] = {
      {"analytic-vs-matrix", oracle_analytic_vs_matrix},
      {"sector-equivalence", oracle_sector_equivalence},
      {"linear-limit-reductions", oracle_linear_limits},
  };
  int failures = 0;
  for (const auto& s : suites) {
    bool ok = false;
    try {
      ok = s.fn();
    } catch (const std::exception& e) {
      std::printf("  %s raised: %s\n", s.name, e.what());
    }
    std::printf("%s %s\n", ok ? "[PASS]" : "[FAIL]", s.name);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnet: localization dynamics in circuit-QED networks"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, validate_flags;

  CLI::App* cmd_run = app.add_subcommand("run", "single trajectory");
  add_common_flags(cmd_run, run_flags);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter grid sweep");
  std::string sweep_config;
  std::optional<std::string> sweep_out;
  std::optional<int> sweep_threads;
  cmd_sweep->add_option("--config", sweep_config, "sweep plan JSON")
      ->required();
  cmd_sweep->add_option("--out", sweep_out, "output directory");
  cmd_sweep->add_option("--threads", sweep_threads, "worker cap");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "check a config and exit");
  add_common_flags(cmd_validate, validate_flags);

  app.add_subcommand("oracle", "run the built-in cross-check suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      qnet::RunConfig cfg = resolve_config(run_flags);
      qnet::RunResult result = qnet::run_and_write(cfg);
      std::cout << result.summary_json.dump(2) << std::endl;
      return 0;
    }
    if (cmd_sweep->parsed()) {
      qnet::SweepPlan plan =
          qnet::sweep_plan_from_json(load_json_file(sweep_config));
      if (sweep_threads) plan.threads = *sweep_threads;
      qnet::SweepResult result = qnet::run_sweep(plan);
      const std::string out = sweep_out.value_or(plan.base.out_dir);
      qnet::write_sweep_artifacts(out, plan, result);
      std::cout << qnet::sweep_metadata_json(plan, result).dump(2)
                << std::endl;
      return 0;
    }
    if (cmd_validate->parsed()) {
      qnet::RunConfig cfg = resolve_config(validate_flags);
      std::cout << qnet::to_json(cfg).dump(2) << std::endl;
      return 0;
    }
    return run_oracle();
  } catch (const std::exception& e) {
    return fail(e);
  }
}
