#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qnet/common.hpp"

namespace qnet {

/// P = 2 n_0 - sum_j n_j, the population imbalance of the test unit.
inline double imbalance_of(const Eigen::Ref<const Eigen::VectorXd>& n) {
  return 2.0 * n(0) - n.sum();
}

// Sampled run output shared by every engine.  `occupations` is sites x samples,
// `imbalance` holds P(t) at every sample, `z_ratio` (open systems only) holds
// Z(t) = P / sum_j n_j with NaN marking samples where the denominator fell
// below the configured floor.  `drift` carries conserved-quantity diagnostics.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd occupations;
  Eigen::MatrixXd qubit_inversion;  // sites x samples, JC engines only
  std::vector<double> imbalance;
  std::vector<double> z_ratio;
  std::map<std::string, double> drift;

  int num_sites() const { return static_cast<int>(occupations.rows()); }
  int num_samples() const { return static_cast<int>(times.size()); }
  bool has_qubits() const { return qubit_inversion.size() != 0; }
  bool has_z() const { return !z_ratio.empty(); }
};

struct LocalizationSummary {
  double eta = 0.0;
  double p_min = 0.0;
  double t_at_min = 0.0;
  double window_t_max = 0.0;
  double np = 0.0;
};

/// Degree of localization eta = (Np + P_min) / (2 Np), with P_min the grid
/// minimum over the sampled window.  eta -> 1 when P never leaves Np and
/// eta -> 0 when P reaches -Np.
inline LocalizationSummary eta_from_trajectory(const Trajectory& traj,
                                               double np) {
  if (traj.times.empty() || traj.imbalance.empty())
    throw std::invalid_argument("eta_from_trajectory: empty trajectory");
  if (np <= 0.0)
    throw std::invalid_argument("eta_from_trajectory: Np must be > 0");

  std::size_t arg = 0;
  double p_min = traj.imbalance[0];
  for (std::size_t i = 1; i < traj.imbalance.size(); ++i) {
    if (traj.imbalance[i] < p_min) {
      p_min = traj.imbalance[i];
      arg = i;
    }
  }

  LocalizationSummary s;
  s.p_min = p_min;
  s.t_at_min = traj.times[arg];
  s.window_t_max = traj.times.back();
  s.np = np;
  s.eta = std::clamp((np + p_min) / (2.0 * np), 0.0, 1.0);
  return s;
}

/// Trend-reversal detector for eta vs N at fixed interaction: returns the N
/// at which eta attains its minimum before the rising branch.  Ties break
/// toward smaller N; a minimum sitting on either end of the series means no
/// reversal and is reported as absent.
inline std::optional<int> detect_n_star(
    const std::vector<std::pair<int, double>>& eta_vs_n) {
  if (eta_vs_n.size() < 3) return std::nullopt;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < eta_vs_n.size(); ++i) {
    if (eta_vs_n[i].second < eta_vs_n[arg].second) arg = i;
  }
  if (arg == 0 || arg + 1 == eta_vs_n.size()) return std::nullopt;
  return eta_vs_n[arg].first;
}

}  // namespace qnet
