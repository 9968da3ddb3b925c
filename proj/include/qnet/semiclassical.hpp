#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qnet/common.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/integrate.hpp"

namespace qnet {

enum class SemiclassicalKind { JaynesCummings, BoseHubbard };

// Mean-field state layout inside one packed complex vector:
//   JC: [alpha_0..alpha_{N-1}, beta_0..beta_{N-1}, w_0..w_{N-1}]
//       with <a_i> = alpha_i, <sigma_i^-> = beta_i, <sigma_i^z> = w_i;
//       the w block stays exactly real (its derivative is constructed real).
//   BH: [alpha_0..alpha_{N-1}].

// Jaynes-Cummings mean-field flow
//   alpha' = -i (h alpha)_i - i g beta_i
//   beta'  = -i omega_q beta_i + i g alpha_i w_i
//   w'     = 2 i g (alpha_i^* beta_i - alpha_i beta_i^*)
// with all hopping and onsite terms routed through the single-particle
// matrix h, so finite-range and disordered networks reuse this one path.
struct JaynesCummingsRhs {
  Eigen::MatrixXcd h_hop;
  double omega_q = 0.0;
  double coupling_g = 0.0;

  void operator()(const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
    const Eigen::Index n = h_hop.rows();
    const auto alpha = y.segment(0, n);
    const auto beta = y.segment(n, n);
    dy.resize(3 * n);
    dy.segment(0, n).noalias() = h_hop * alpha;
    dy.segment(0, n) = -kI * dy.segment(0, n) - (kI * coupling_g) * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = y(2 * n + i).real();
      dy(n + i) = -kI * omega_q * beta(i) + kI * coupling_g * alpha(i) * w;
      dy(2 * n + i) =
          cxd(-4.0 * coupling_g * std::imag(std::conj(alpha(i)) * beta(i)), 0.0);
    }
  }
};

// Bose-Hubbard mean-field flow: alpha' = -i (h alpha)_i + i U |alpha_i|^2 alpha_i.
struct BoseHubbardRhs {
  Eigen::MatrixXcd h_hop;
  double interaction_u = 0.0;

  void operator()(const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
    dy.resize(y.size());
    dy.noalias() = h_hop * y;
    dy = -kI * dy;
    dy += (kI * interaction_u) * y.cwiseAbs2().cast<cxd>().cwiseProduct(y);
  }
};

inline Eigen::VectorXcd rhs_jc(const Eigen::VectorXcd& y,
                               const Eigen::MatrixXcd& h_hop, double omega_q,
                               double coupling_g) {
  JaynesCummingsRhs rhs{h_hop, omega_q, coupling_g};
  Eigen::VectorXcd dy;
  rhs(y, dy);
  return dy;
}

inline Eigen::VectorXcd rhs_bh(const Eigen::VectorXcd& y,
                               const Eigen::MatrixXcd& h_hop,
                               double interaction_u) {
  BoseHubbardRhs rhs{h_hop, interaction_u};
  Eigen::VectorXcd dy;
  rhs(y, dy);
  return dy;
}

/// alpha_0 = sqrt(Np), everything else empty; qubits start in the ground
/// state (w = -1, beta = 0).
inline Eigen::VectorXcd initial_semiclassical_jc(int num_sites, double np) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(3 * num_sites);
  y(0) = std::sqrt(np);
  for (int i = 0; i < num_sites; ++i) y(2 * num_sites + i) = cxd(-1.0, 0.0);
  return y;
}

inline Eigen::VectorXcd initial_semiclassical_bh(int num_sites, double np) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(num_sites);
  y(0) = std::sqrt(np);
  return y;
}

/// Integrates a semiclassical flow over the sample grid and extracts
/// n_i = |alpha_i|^2, P(t), and (JC) the inversion w_i.  Drift diagnostics:
/// JC conserves Q = sum(|alpha|^2 + (w+1)/2), BH conserves sum |alpha|^2;
/// JC Bloch-sphere consistency |beta|^2 <= (1-w^2)/4 is monitored, not
/// enforced.
template <typename Rhs>
Trajectory integrate_semiclassical(Rhs&& rhs, const Eigen::VectorXcd& y0,
                                   SemiclassicalKind kind, int num_sites,
                                   const std::vector<double>& times,
                                   const IntegratorConfig& cfg) {
  cfg.validate();
  if (times.empty())
    throw std::invalid_argument("integrate_semiclassical: empty time grid");
  if (!y0.allFinite())
    throw std::invalid_argument("integrate_semiclassical: initial state not finite");

  const int n = num_sites;
  Trajectory traj;
  traj.times = times;
  traj.occupations.resize(n, times.size());
  traj.imbalance.resize(times.size());
  if (kind == SemiclassicalKind::JaynesCummings)
    traj.qubit_inversion.resize(n, times.size());

  double charge0 = 0.0;
  double charge_drift = 0.0;
  double bloch_violation = 0.0;

  auto observe = [&](std::size_t s, const Eigen::VectorXcd& y) {
    Eigen::VectorXd occ(n);
    for (int i = 0; i < n; ++i) occ(i) = std::norm(y(i));
    traj.occupations.col(s) = occ;
    traj.imbalance[s] = imbalance_of(occ);

    double charge = occ.sum();
    if (kind == SemiclassicalKind::JaynesCummings) {
      for (int i = 0; i < n; ++i) {
        const double w = y(2 * n + i).real();
        traj.qubit_inversion(i, s) = w;
        charge += 0.5 * (w + 1.0);
        bloch_violation = std::max(
            bloch_violation, std::norm(y(n + i)) - 0.25 * (1.0 - w * w));
      }
    }
    if (s == 0) charge0 = charge;
    charge_drift = std::max(charge_drift,
                            std::abs(charge - charge0) / std::max(charge0, 1e-300));
  };

  Eigen::VectorXcd y = y0;
  if (cfg.method == IntegratorConfig::Method::FixedRk4) {
    integrate_rk4(rhs, y, times, cfg.dt, observe);
  } else {
    integrate_rk45(rhs, y, times, cfg.rtol, cfg.atol, observe);
  }

  traj.drift["conserved_charge_rel_drift"] = charge_drift;
  if (kind == SemiclassicalKind::JaynesCummings)
    traj.drift["bloch_violation_max"] = std::max(bloch_violation, 0.0);
  return traj;
}

/// Convenience wrapper: builds the RHS and initial state from the unit
/// parameters and runs the flow over the grid.
inline Trajectory simulate_jc(const Eigen::MatrixXcd& h_hop, double omega_q,
                              double coupling_g, double np,
                              const std::vector<double>& times,
                              const IntegratorConfig& cfg) {
  const int n = static_cast<int>(h_hop.rows());
  JaynesCummingsRhs rhs{h_hop, omega_q, coupling_g};
  return integrate_semiclassical(rhs, initial_semiclassical_jc(n, np),
                                 SemiclassicalKind::JaynesCummings, n, times,
                                 cfg);
}

inline Trajectory simulate_bh(const Eigen::MatrixXcd& h_hop,
                              double interaction_u, double np,
                              const std::vector<double>& times,
                              const IntegratorConfig& cfg) {
  const int n = static_cast<int>(h_hop.rows());
  BoseHubbardRhs rhs{h_hop, interaction_u};
  return integrate_semiclassical(rhs, initial_semiclassical_bh(n, np),
                                 SemiclassicalKind::BoseHubbard, n, times, cfg);
}

}  // namespace qnet
