// Acceptance suite: one binary, one criterion per number, one pass/fail line
// each.  Every tolerance is pinned in code; nothing defers to later
// calibration.  Run all criteria (no arguments) or one (--criterion k).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnet/qnet.hpp"

using namespace qnet;

namespace {

int g_threads = 0;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double wall_seconds(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Eigen::MatrixXcd clean_single_particle(int n, Connectivity c,
                                       double hopping = 1.0) {
  NetworkSpec spec;
  spec.num_sites = n;
  spec.hopping = hopping;
  spec.connectivity = c;
  return single_particle_hamiltonian(spec, 0.0, DisorderRealization::clean(n));
}

double quantum_eta(int n, int np, const UnitModel& model,
                   const Eigen::MatrixXcd& h_single, double t_max,
                   int samples) {
  auto basis = build_basis(n, np, model_kind(model), np, 8'000'000);
  auto h = assemble_hamiltonian(basis, model, h_single);
  auto traj = evolve(h, basis, initial_fock_state(basis, 0, np),
                     make_time_grid(t_max, samples));
  return eta_from_trajectory(traj, np).eta;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// interaction value where an eta curve first crosses 1/2, log-interpolated
std::optional<double> transition_location(const std::vector<double>& x,
                                          const std::vector<double>& eta) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (eta[i - 1] < 0.5 && eta[i] >= 0.5) {
      const double w = (0.5 - eta[i - 1]) / (eta[i] - eta[i - 1]);
      return std::exp((1.0 - w) * std::log(x[i - 1]) + w * std::log(x[i]));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 1. Harmonic closed form, exact: simulated all-to-all eta vs 1 - 4/N + 4/N^2

Verdict criterion1() {
  Verdict v;
  double elapsed = wall_seconds([&] {
    double worst_sim = 0.0, worst_closed = 0.0;
    for (int n = 2; n <= 50; ++n) {
      // simulate one full revival period; the grid minimum then resolves the
      // true minimum to well below 1e-4
      auto h = clean_single_particle(n, Connectivity::all_to_all());
      auto traj = harmonic_trajectory(
          h, 10.0, make_time_grid(all_to_all_period(n, 1.0), 1000));
      const double eta_sim = eta_from_trajectory(traj, 10.0).eta;
      worst_sim = std::max(worst_sim,
                           std::abs(eta_sim - eta_all_to_all_closed_form(n)));

      // closed-form route: analytic minimum of the periodic imbalance
      HarmonicParams params{n, Connectivity::all_to_all(), 1.0, 0.0, 10};
      const double p_min = imbalance_all_to_all(params, kPi / n);
      const double eta_analytic = (10.0 + p_min) / 20.0;
      worst_closed = std::max(
          worst_closed, std::abs(eta_analytic - eta_all_to_all_closed_form(n)));
    }
    v.require(worst_sim < 1e-4, "simulated eta off by " + fmt(worst_sim));
    v.require(worst_closed < 1e-12,
              "closed-form eta off by " + fmt(worst_closed));
    v.note("max |eta_sim - closed| = " + fmt(worst_sim) +
           ", |eta_analytic - closed| = " + fmt(worst_closed));
  });
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s exceeds 1 s");
  v.note("runtime " + fmt(elapsed) + " s");
  return v;
}

// ---------------------------------------------------------------------------
// 2. Finite-range mode sum vs correlation-matrix oracle; connectivity collapse

Verdict criterion2() {
  Verdict v;
  double elapsed = wall_seconds([&] {
    double worst = 0.0;
    for (int n = 2; n <= 20; ++n) {
      for (int d = 1; d < half_ceil(n); ++d) {
        HarmonicParams params{n, Connectivity::finite_range(d), 1.0, 0.0, 10};
        FiniteRangeImbalance closed(params);
        CorrelationPropagator prop(
            clean_single_particle(n, Connectivity::finite_range(d)));
        for (int s = 0; s < 500; ++s) {
          const double t = 20.0 * s / 499.0;
          worst =
              std::max(worst, std::abs(closed(t) - prop.imbalance(10.0, t)));
        }
      }
    }
    v.require(worst < 1e-8, "formula vs oracle mismatch " + fmt(worst));
    v.note("max |dP| over all (N <= 20, D) = " + fmt(worst));

    // losing the all-to-all configuration at N = 50 collapses eta
    double eta_below = 0.0;
    auto times = make_time_grid(50.0, 5000);
    for (int d : {1, 4, 8, 12, 16, 20, 24}) {
      auto traj = harmonic_trajectory(
          clean_single_particle(50, Connectivity::finite_range(d)), 10.0,
          times);
      eta_below = std::max(eta_below, eta_from_trajectory(traj, 10.0).eta);
    }
    auto traj_full = harmonic_trajectory(
        clean_single_particle(50, Connectivity::all_to_all()), 10.0,
        make_time_grid(all_to_all_period(50, 1.0), 2000));
    const double eta_full = eta_from_trajectory(traj_full, 10.0).eta;
    v.require(eta_below < 0.2 && eta_full > 0.9,
              "collapse not reproduced: max eta(D<25) = " + fmt(eta_below) +
                  ", eta(all-to-all) = " + fmt(eta_full));
    v.note("max eta(D < 25) = " + fmt(eta_below) + " vs eta(all-to-all) = " +
           fmt(eta_full));
  });
  v.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s exceeds 10 s");
  v.note("runtime " + fmt(elapsed) + " s");
  return v;
}

// ---------------------------------------------------------------------------
// 3. Linear-limit reductions at N = 3, Np = 4 over t in [0, 20/J]

Verdict criterion3() {
  Verdict v;
  const int n = 3, np = 4;
  auto h_single = clean_single_particle(n, Connectivity::all_to_all());
  HarmonicParams params{n, Connectivity::all_to_all(), 1.0, 0.0, np};
  auto times = make_time_grid(20.0, 500);

  IntegratorConfig cfg;
  auto sc_jc = simulate_jc(h_single, 0.0, 0.0, np, times, cfg);
  auto sc_bh = simulate_bh(h_single, 0.0, np, times, cfg);

  auto basis_jc = build_basis(n, np, ModelKind::JaynesCummings, np);
  auto basis_bh = build_basis(n, np, ModelKind::BoseHubbard, np);
  auto q_jc = evolve(assemble_hamiltonian(
                         basis_jc, JaynesCummingsModel{0.0, 0.0, 0.0}, h_single),
                     basis_jc, initial_fock_state(basis_jc, 0, np), times);
  auto q_bh =
      evolve(assemble_hamiltonian(basis_bh, BoseHubbardModel{0.0, 0.0}, h_single),
             basis_bh, initial_fock_state(basis_bh, 0, np), times);

  double worst = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double exact = imbalance_all_to_all(params, times[s]);
    worst = std::max({worst, std::abs(sc_jc.imbalance[s] - exact),
                      std::abs(sc_bh.imbalance[s] - exact),
                      std::abs(q_jc.imbalance[s] - exact),
                      std::abs(q_bh.imbalance[s] - exact)});
  }
  v.require(worst < 1e-6, "linear-limit mismatch " + fmt(worst));
  v.note("max |dP| across the four reductions = " + fmt(worst));
  return v;
}

// ---------------------------------------------------------------------------
// 4. Quantum JC self-trapping transition: N = 5, Np = 10, all-to-all

Verdict criterion4() {
  Verdict v;
  const int n = 5, np = 10;
  const std::vector<double> g_grid = {1.0, 2.0, 4.0, 8.0, 16.0, 40.0};
  auto h_single = clean_single_particle(n, Connectivity::all_to_all());

  std::vector<double> eta(g_grid.size());
  parallel_for(g_grid.size(), resolve_thread_count(g_threads),
               [&](std::size_t i) {
                 eta[i] =
                     quantum_eta(n, np, JaynesCummingsModel{0.0, 0.0, g_grid[i]},
                                 h_single, 50.0, 2500);
               });

  std::string curve;
  for (std::size_t i = 0; i < g_grid.size(); ++i)
    curve += " eta(g=" + fmt(g_grid[i]) + ")=" + fmt(eta[i]);
  v.note("curve:" + curve);

  v.require(eta.back() > 0.9,
            "eta at largest g = " + fmt(eta.back()) + " (need > 0.9)");
  v.require(eta.front() < 0.2,
            "eta at smallest g = " + fmt(eta.front()) + " (need < 0.2)");
  // monotone up to sampling noise on the grid minimum
  for (std::size_t i = 1; i < eta.size(); ++i)
    v.require(eta[i] >= eta[i - 1] - 0.03,
              "eta(g) drops from " + fmt(eta[i - 1]) + " to " + fmt(eta[i]) +
                  " at g = " + fmt(g_grid[i]));
  return v;
}

// ---------------------------------------------------------------------------
// 5. Quantum BH non-monotonicity: saturated P ordering flips between
//    U = 0.1 J and U = J for N = 3 vs 4 (Np = 10, all-to-all)

Verdict criterion5() {
  Verdict v;
  auto saturated_p = [&](int n, double u) {
    auto basis = build_basis(n, 10, ModelKind::BoseHubbard, 10);
    auto h = assemble_hamiltonian(
        basis, BoseHubbardModel{0.0, u},
        clean_single_particle(n, Connectivity::all_to_all()));
    auto times = make_time_grid(50.0, 2000);
    auto traj = evolve(h, basis, initial_fock_state(basis, 0, 10), times);
    double acc = 0.0;
    int cnt = 0;
    for (std::size_t s = times.size() / 2; s < times.size(); ++s) {
      acc += traj.imbalance[s];
      ++cnt;
    }
    return acc / cnt;
  };
  const double weak3 = saturated_p(3, 0.1), weak4 = saturated_p(4, 0.1);
  const double strong3 = saturated_p(3, 1.0), strong4 = saturated_p(4, 1.0);
  v.require(weak4 > weak3,
            "at U = 0.1J expected P_sat(N=4) > P_sat(N=3), got " + fmt(weak4) +
                " vs " + fmt(weak3));
  v.require(strong3 > strong4,
            "at U = J expected P_sat(N=3) > P_sat(N=4), got " + fmt(strong3) +
                " vs " + fmt(strong4));
  v.note("U=0.1J: P_sat(3)=" + fmt(weak3) + " P_sat(4)=" + fmt(weak4) +
         "; U=J: P_sat(3)=" + fmt(strong3) + " P_sat(4)=" + fmt(strong4));
  return v;
}

// ---------------------------------------------------------------------------
// 6. Semiclassical BH threshold N*: exists for U in {J, 2J, 4J} and grows

Verdict criterion6() {
  Verdict v;
  const std::vector<double> u_values = {1.0, 2.0, 4.0};
  const int n_min = 2, n_max = 50;
  struct Task {
    int iu;
    int n;
  };
  std::vector<Task> tasks;
  for (int iu = 0; iu < 3; ++iu)
    for (int n = n_min; n <= n_max; ++n) tasks.push_back({iu, n});
  std::vector<double> eta(tasks.size());
  parallel_for(tasks.size(), resolve_thread_count(g_threads),
               [&](std::size_t i) {
                 IntegratorConfig cfg;
                 auto h = clean_single_particle(tasks[i].n,
                                                Connectivity::all_to_all());
                 auto traj = simulate_bh(h, u_values[tasks[i].iu], 10.0,
                                         make_time_grid(50.0, 2500), cfg);
                 eta[i] = eta_from_trajectory(traj, 10.0).eta;
               });

  std::vector<int> n_stars;
  for (int iu = 0; iu < 3; ++iu) {
    std::vector<std::pair<int, double>> curve;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].iu == iu) curve.push_back({tasks[i].n, eta[i]});
    std::sort(curve.begin(), curve.end());
    auto n_star = detect_n_star(curve);
    v.require(n_star.has_value(),
              "no trend reversal found for U = " + fmt(u_values[iu]));
    if (n_star) n_stars.push_back(*n_star);
  }
  if (n_stars.size() == 3) {
    v.require(n_stars[0] < n_stars[1] && n_stars[1] < n_stars[2],
              "N*(U) not increasing: " + std::to_string(n_stars[0]) + ", " +
                  std::to_string(n_stars[1]) + ", " +
                  std::to_string(n_stars[2]));
    v.note("N*(J)=" + std::to_string(n_stars[0]) +
           " N*(2J)=" + std::to_string(n_stars[1]) +
           " N*(4J)=" + std::to_string(n_stars[2]));
  }
  return v;
}

// ---------------------------------------------------------------------------
// 7. Semiclassical vs quantum benchmark at N = 4, Np = 20

Verdict criterion7() {
  Verdict v;
  const int n = 4, np = 20;
  auto h_single = clean_single_particle(n, Connectivity::all_to_all());
  IntegratorConfig cfg;
  auto times_sc = make_time_grid(50.0, 2000);

  auto compare = [&](const std::vector<double>& grid, bool jc,
                     const char* label) {
    std::vector<double> eta_q(grid.size()), eta_sc(grid.size());
    parallel_for(grid.size(), resolve_thread_count(g_threads),
                 [&](std::size_t i) {
                   UnitModel model =
                       jc ? UnitModel(JaynesCummingsModel{0.0, 0.0, grid[i]})
                          : UnitModel(BoseHubbardModel{0.0, grid[i]});
                   eta_q[i] = quantum_eta(n, np, model, h_single, 50.0, 1500);
                 });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto traj = jc ? simulate_jc(h_single, 0.0, grid[i], np, times_sc, cfg)
                     : simulate_bh(h_single, grid[i], np, times_sc, cfg);
      eta_sc[i] = eta_from_trajectory(traj, np).eta;
    }

    auto xq = transition_location(grid, eta_q);
    auto xs = transition_location(grid, eta_sc);
    v.require(xq.has_value() && xs.has_value(),
              std::string(label) + ": transition not bracketed by the grid");
    if (xq && xs) {
      const double ratio = *xq / *xs;
      v.require(ratio > 0.5 && ratio < 2.0,
                std::string(label) + ": transition locations " + fmt(*xq) +
                    " (quantum) vs " + fmt(*xs) +
                    " (semiclassical) differ beyond a factor 2");
      // away from both transitions the curves must agree within 0.15
      const double lo = 0.5 * std::min(*xq, *xs);
      const double hi = 2.0 * std::max(*xq, *xs);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > lo && grid[i] < hi) continue;
        worst = std::max(worst, std::abs(eta_q[i] - eta_sc[i]));
      }
      v.require(worst < 0.15,
                std::string(label) + ": off-transition deviation " + fmt(worst));
      v.note(std::string(label) + ": transition q=" + fmt(*xq) + " sc=" +
             fmt(*xs) + ", off-transition max |d eta| = " + fmt(worst));
    }
  };

  compare({0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}, true, "JC eta(g)");
  compare({0.1, 0.2, 0.4, 0.8, 1.6, 3.2}, false, "BH eta(U)");
  return v;
}

// ---------------------------------------------------------------------------
// 8. Open-system validity: trace/hermiticity over 200/J, damped-cavity
//    exponent, and the Z(t) > 0.8 persistence contrast between g = 40J and 2J

Verdict criterion8() {
  Verdict v;
  const int n = 3, np = 5;
  auto h_single = clean_single_particle(n, Connectivity::all_to_all());
  auto basis =
      ManyBodyBasis::build(n, np, true, BasisTruncation::MaxTotal, np, 256);
  OpenSystemRates rates{0.01, 0.01, 0.0};

  auto first_crossing = [](const Trajectory& traj, double level) {
    for (std::size_t s = 0; s < traj.times.size(); ++s)
      if (!std::isnan(traj.z_ratio[s]) && traj.z_ratio[s] < level)
        return traj.times[s];
    return traj.times.back();  // never crossed: lower bound
  };

  Trajectory trapped, untrapped;
  parallel_for(2, resolve_thread_count(g_threads), [&](std::size_t i) {
    const double g = i == 0 ? 40.0 : 2.0;
    auto h =
        assemble_hamiltonian(basis, JaynesCummingsModel{0.0, 0.0, g}, h_single);
    LindbladPropagator prop(basis, h, rates);
    auto rho0 = DensityMatrix::pure(initial_fock_state(basis, 0, np)).mat;
    if (i == 0)
      trapped = prop.evolve(rho0, make_time_grid(200.0, 2001), 2e-3);
    else
      untrapped = prop.evolve(rho0, make_time_grid(20.0, 801), 2e-3);
  });

  v.require(trapped.drift.at("trace_drift") < 1e-8,
            "trace drift " + fmt(trapped.drift.at("trace_drift")));
  v.require(trapped.drift.at("hermiticity_deviation") < 1e-10,
            "hermiticity deviation " +
                fmt(trapped.drift.at("hermiticity_deviation")));

  const double window_trapped = first_crossing(trapped, 0.8);
  const double window_untrapped = first_crossing(untrapped, 0.8);
  v.require(window_trapped >= 10.0 * window_untrapped,
            "Z > 0.8 window ratio " + fmt(window_trapped / window_untrapped) +
                " below 10");
  v.note("trace drift " + fmt(trapped.drift.at("trace_drift")) + ", herm " +
         fmt(trapped.drift.at("hermiticity_deviation")) + ", Z>0.8 for " +
         fmt(window_trapped) + "/J (g=40J) vs " + fmt(window_untrapped) +
         "/J (g=2J)");

  // single decoupled cavity: <n>(t) = exp(-kappa t)
  const double kappa = 0.25;
  auto basis1 =
      ManyBodyBasis::build(2, 1, false, BasisTruncation::MaxTotal, 1, 256);
  auto h_dec = assemble_hamiltonian(
      basis1, BoseHubbardModel{0.0, 0.0},
      clean_single_particle(2, Connectivity::all_to_all(), 0.0));
  LindbladPropagator prop1(basis1, h_dec, OpenSystemRates{kappa, 0.0, 0.0});
  auto traj1 =
      prop1.evolve(DensityMatrix::pure(initial_fock_state(basis1, 0, 1)).mat,
                   make_time_grid(8.0, 81), 1e-3);
  double sxx = 0, sxy = 0, sx = 0, sy = 0, m = 0;
  for (std::size_t s = 0; s < traj1.times.size(); ++s) {
    const double y = std::log(traj1.occupations(0, s));
    sx += traj1.times[s];
    sy += y;
    sxx += traj1.times[s] * traj1.times[s];
    sxy += traj1.times[s] * y;
    m += 1.0;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  v.require(std::abs(-slope / kappa - 1.0) < 0.01,
            "decay exponent " + fmt(-slope) + " vs kappa = " + fmt(kappa));
  v.note("damped-cavity exponent " + fmt(-slope) + " (kappa = " + fmt(kappa) +
         ")");
  return v;
}

// ---------------------------------------------------------------------------
// 9. Disorder robustness: quantum N = 5, Np = 10 with
//    delta_omega = 0.01 omega_c (reference omega_c = 10 J) and delta_J = 0.01 J

Verdict criterion9() {
  Verdict v;
  const int n = 5, np = 10;
  const double delta_omega = 0.1;  // 0.01 * (omega_c = 10 J)
  const double delta_j = 0.01;
  const int ensemble = 6;
  const double t_max = 20.0;
  const int samples = 800;

  struct Case {
    bool jc;
    double value;
  };
  std::vector<Case> cases = {{true, 0.5},  {true, 2.0},  {true, 8.0},
                             {false, 0.2}, {false, 1.0}, {false, 4.0}};

  struct Task {
    int ic;
    int rep;  // -1 = clean reference
  };
  std::vector<Task> tasks;
  for (int ic = 0; ic < static_cast<int>(cases.size()); ++ic)
    for (int rep = -1; rep < ensemble; ++rep) tasks.push_back({ic, rep});
  std::vector<double> eta(tasks.size());

  parallel_for(tasks.size(), resolve_thread_count(g_threads),
               [&](std::size_t i) {
                 const Case& c = cases[tasks[i].ic];
                 NetworkSpec spec;
                 spec.num_sites = n;
                 if (tasks[i].rep >= 0) {
                   spec.disorder.delta_omega = delta_omega;
                   spec.disorder.delta_hopping = delta_j;
                   spec.seed = derive_seed(
                       2026, {static_cast<std::uint64_t>(tasks[i].ic),
                              static_cast<std::uint64_t>(tasks[i].rep)});
                 }
                 auto h = single_particle_hamiltonian(spec, 0.0,
                                                      sample_disorder(spec));
                 UnitModel model =
                     c.jc ? UnitModel(JaynesCummingsModel{0.0, 0.0, c.value})
                          : UnitModel(BoseHubbardModel{0.0, c.value});
                 eta[i] = quantum_eta(n, np, model, h, t_max, samples);
               });

  for (int ic = 0; ic < static_cast<int>(cases.size()); ++ic) {
    double clean = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].ic != ic) continue;
      if (tasks[i].rep < 0)
        clean = eta[i];
      else
        acc += eta[i];
    }
    const double mean = acc / ensemble;
    const std::string label =
        (cases[ic].jc ? "JC g=" : "BH U=") + fmt(cases[ic].value);
    v.require(std::abs(mean - clean) < 0.1,
              label + ": ensemble mean " + fmt(mean) + " vs clean " +
                  fmt(clean));
    v.note(label + ": clean " + fmt(clean) + " mean " + fmt(mean));
  }

  // zero-width disorder reproduces the clean run bitwise
  nlohmann::json base = {{"engine", "quantum"}, {"model", "bh"}, {"N", n},
                         {"Np", np},            {"U", 1.0},      {"seed", 7},
                         {"t_max", 5.0},        {"samples", 50}};
  nlohmann::json zeroed = base;
  zeroed["disorder"] = {{"delta_omega", 0.0}, {"delta_J", 0.0}};
  auto csv_a = trajectory_csv(run_single(parse_config(base)).trajectory);
  auto csv_b = trajectory_csv(run_single(parse_config(zeroed)).trajectory);
  v.require(csv_a == csv_b, "zero-width disorder is not bitwise clean");
  return v;
}

// ---------------------------------------------------------------------------
// 10. Determinism: byte-identical CSV for every fixed-step engine

Verdict criterion10() {
  Verdict v;
  using nlohmann::json;
  std::vector<json> configs = {
      {{"engine", "harmonic"},
       {"N", 12},
       {"Np", 10},
       {"seed", 3},
       {"t_max", 3.0},
       {"samples", 300},
       {"disorder", {{"delta_omega", 0.2}, {"delta_J", 0.05}}}},
      {{"engine", "semiclassical-jc"},
       {"N", 4},
       {"Np", 10},
       {"g", 2.5},
       {"seed", 4},
       {"t_max", 10.0},
       {"samples", 200}},
      {{"engine", "semiclassical-bh"},
       {"N", 4},
       {"Np", 10},
       {"U", 1.5},
       {"seed", 5},
       {"t_max", 10.0},
       {"samples", 200},
       {"disorder", {{"delta_omega", 0.1}, {"delta_J", 0.02}}}},
      {{"engine", "lindblad"},
       {"model", "jc"},
       {"N", 2},
       {"Np", 2},
       {"g", 3.0},
       {"seed", 6},
       {"t_max", 5.0},
       {"samples", 100},
       {"rates", {{"kappa", 0.02}, {"gamma", 0.01}, {"gamma_phi", 0.01}}}},
  };
  for (const auto& j : configs) {
    auto cfg = parse_config(j);
    auto a = trajectory_csv(run_single(cfg).trajectory);
    auto b = trajectory_csv(run_single(cfg).trajectory);
    v.require(a == b, j.at("engine").get<std::string>() +
                          " trajectories differ between identical runs");
  }
  v.note("harmonic, semiclassical-jc, semiclassical-bh, lindblad identical");
  return v;
}

struct Criterion {
  int number;
  const char* name;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "harmonic all-to-all closed form", criterion1},
    {2, "finite-range formula vs correlation oracle", criterion2},
    {3, "linear-limit reductions", criterion3},
    {4, "quantum JC self-trapping transition", criterion4},
    {5, "quantum BH non-monotonicity", criterion5},
    {6, "semiclassical BH threshold N*", criterion6},
    {7, "semiclassical vs quantum benchmark", criterion7},
    {8, "open-system validity and Z persistence", criterion8},
    {9, "disorder robustness", criterion9},
    {10, "fixed-step determinism", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      g_threads = std::atoi(argv[++i]);
    else
      only = std::atoi(argv[i]);  // bare criterion number works too
  }

  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.number != only) continue;
    Verdict v;
    double secs = 0.0;
    try {
      secs = wall_seconds([&] { v = c.run(); });
    } catch (const std::exception& e) {
      v.pass = false;
      v.note(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d: %s (%.1f s) %s\n", v.pass ? "PASS" : "FAIL",
                c.number, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
