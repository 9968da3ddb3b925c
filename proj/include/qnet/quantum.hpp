#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qnet/basis.hpp"
#include "qnet/common.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/model.hpp"
#include "qnet/network.hpp"

namespace qnet {

struct SparseHamiltonian {
  Eigen::SparseMatrix<cxd, Eigen::RowMajor> matrix;
  bool hermitian = false;

  std::size_t dimension() const {
    return static_cast<std::size_t>(matrix.rows());
  }

  /// max |H - H^dagger|; intended for tests and small instances.
  double hermiticity_deviation() const {
    Eigen::SparseMatrix<cxd, Eigen::RowMajor> diff =
        matrix - Eigen::SparseMatrix<cxd, Eigen::RowMajor>(
                     matrix.adjoint());
    double dev = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (decltype(diff)::InnerIterator it(diff, k); it; ++it)
        dev = std::max(dev, std::abs(it.value()));
    return dev;
  }
};

// Many-body Hamiltonian over `basis` from the single-particle matrix h
// (onsite cavity energies on the diagonal, -J_ij off it) plus the unit
// model's qubit / nonlinear terms:
//   onsite   h_ii n_i  [+ omega_q s_i | - (U/2) n_i^2]
//   JC       g sqrt(n+1) between |n, e> and |n+1, g> on each site
//   hopping  h_ij sqrt(n_j (n_i + 1)) moving one boson j -> i
// The per-site truncation suppresses any creation above the cap, and terms
// are emitted in conjugate pairs so Hermiticity is exact.
inline SparseHamiltonian assemble_hamiltonian(const ManyBodyBasis& basis,
                                              const UnitModel& model,
                                              const Eigen::MatrixXcd& h_single) {
  const int n_sites = basis.num_sites();
  if (h_single.rows() != n_sites || h_single.cols() != n_sites)
    throw std::invalid_argument(
        "assemble_hamiltonian: single-particle matrix does not match basis");
  if ((h_single - h_single.adjoint()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, h_single.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "assemble_hamiltonian: single-particle matrix must be Hermitian");

  const ModelKind kind = model_kind(model);
  if ((kind == ModelKind::JaynesCummings) != basis.has_qubits())
    throw std::invalid_argument(
        "assemble_hamiltonian: basis does not match the model kind");

  const double omega_q =
      kind == ModelKind::JaynesCummings
          ? std::get<JaynesCummingsModel>(model).omega_q
          : 0.0;
  const double g = kind == ModelKind::JaynesCummings
                       ? std::get<JaynesCummingsModel>(model).coupling_g
                       : 0.0;
  const double u = kind == ModelKind::BoseHubbard
                       ? std::get<BoseHubbardModel>(model).interaction_u
                       : 0.0;

  const std::size_t dim = basis.dimension();
  const int cap = basis.max_occupation();

  std::vector<Eigen::Triplet<cxd>> triplets;
  triplets.reserve(dim * (2 + 2 * n_sites));

  for (std::size_t col = 0; col < dim; ++col) {
    const std::uint64_t key = basis.key_of(col);

    double diag = 0.0;
    for (int i = 0; i < n_sites; ++i) {
      const int n = basis.photon_of_key(key, i);
      diag += h_single(i, i).real() * n;
      if (kind == ModelKind::JaynesCummings)
        diag += omega_q * basis.qubit_of_key(key, i);
      if (kind == ModelKind::BoseHubbard)
        diag -= 0.5 * u * static_cast<double>(n) * n;
    }
    triplets.emplace_back(static_cast<int>(col), static_cast<int>(col),
                          cxd(diag, 0.0));

    // light-matter flip: emitted once per (|n, e>, |n+1, g>) pair
    if (kind == ModelKind::JaynesCummings && g != 0.0) {
      for (int i = 0; i < n_sites; ++i) {
        if (basis.qubit_of_key(key, i) != 1) continue;
        const int n = basis.photon_of_key(key, i);
        if (n + 1 > cap) continue;
        std::uint64_t flipped =
            basis.key_with_qubit(basis.key_with_photon(key, i, n + 1), i, 0);
        auto row = basis.index_of_key(flipped);
        if (!row) continue;  // leaves a restricted sector only via truncation
        const cxd v(g * std::sqrt(n + 1.0), 0.0);
        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), v);
        triplets.emplace_back(static_cast<int>(col), static_cast<int>(*row), v);
      }
    }

    // hopping: every ordered connected pair emits its own direction
    for (int i = 0; i < n_sites; ++i) {
      for (int j = 0; j < n_sites; ++j) {
        if (i == j) continue;
        const cxd t = h_single(i, j);
        if (t == cxd(0.0, 0.0)) continue;
        const int nj = basis.photon_of_key(key, j);
        const int ni = basis.photon_of_key(key, i);
        if (nj < 1 || ni + 1 > cap) continue;
        std::uint64_t moved = basis.key_with_photon(
            basis.key_with_photon(key, j, nj - 1), i, ni + 1);
        auto row = basis.index_of_key(moved);
        if (!row) continue;
        triplets.emplace_back(
            static_cast<int>(*row), static_cast<int>(col),
            t * std::sqrt(static_cast<double>(nj) * (ni + 1.0)));
      }
    }
  }

  SparseHamiltonian h;
  h.matrix.resize(static_cast<Eigen::Index>(dim),
                  static_cast<Eigen::Index>(dim));
  h.matrix.setFromTriplets(triplets.begin(), triplets.end());
  h.matrix.makeCompressed();
  h.hermitian = true;
  return h;
}

/// Network-level convenience: builds the single-particle matrix from the
/// spec + disorder realization, then assembles over the basis.
inline SparseHamiltonian assemble_hamiltonian(
    const NetworkSpec& spec, const UnitModel& model, const ManyBodyBasis& basis,
    const DisorderRealization& realization) {
  Eigen::MatrixXcd h_single =
      single_particle_hamiltonian(spec, model_omega_c(model), realization);
  return assemble_hamiltonian(basis, model, h_single);
}

struct EvolveOptions {
  double krylov_tol = 1e-12;   // per-step 2-norm error target
  int krylov_max = 48;         // Krylov dimension cap before substepping
  int energy_stride = 16;      // samples between <H> drift checks
};

// Short-time Lanczos propagator with full reorthogonalization.  One step
// computes psi <- exp(-i H dt) psi; the Krylov dimension grows until the
// a-posteriori estimate beta_m |y_m| meets the tolerance, and the step is
// split recursively when the cap is reached first.
class LanczosPropagator {
 public:
  LanczosPropagator(const SparseHamiltonian& h, const EvolveOptions& opts)
      : h_(&h), opts_(opts) {
    const Eigen::Index dim = h.matrix.rows();
    basis_vectors_.resize(dim, opts.krylov_max + 1);
    alpha_.resize(opts.krylov_max);
    beta_.resize(opts.krylov_max);
  }

  void step(Eigen::VectorXcd& psi, double dt) { step_impl(psi, dt, 0); }

 private:
  void step_impl(Eigen::VectorXcd& psi, double dt, int depth) {
    if (depth > 40)
      throw IntegrationError("LanczosPropagator: step splitting diverged");

    const double norm0 = psi.norm();
    basis_vectors_.col(0) = psi / norm0;

    int m = 0;
    bool converged = false;
    Eigen::VectorXcd combo;

    while (m < opts_.krylov_max && !converged) {
      Eigen::VectorXcd w = h_->matrix * basis_vectors_.col(m);
      double a = std::real(basis_vectors_.col(m).dot(w));
      w -= a * basis_vectors_.col(m);
      if (m > 0) w -= beta_(m - 1) * basis_vectors_.col(m - 1);
      // two-pass reorthogonalization keeps the tridiagonal honest
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k <= m; ++k)
          w -= basis_vectors_.col(k).dot(w) * basis_vectors_.col(k);
      alpha_(m) = a;
      beta_(m) = w.norm();
      ++m;

      const bool breakdown = beta_(m - 1) < 1e-13;
      if (breakdown || m % 4 == 0 || m == opts_.krylov_max) {
        double err = small_exp(m, dt, combo);
        if (breakdown || err < opts_.krylov_tol) {
          converged = true;
          break;
        }
      }
      if (!converged && m < opts_.krylov_max)
        basis_vectors_.col(m) = w / beta_(m - 1);
    }

    if (!converged) {
      step_impl(psi, 0.5 * dt, depth + 1);
      step_impl(psi, 0.5 * dt, depth + 1);
      return;
    }
    psi = norm0 * (basis_vectors_.leftCols(m) * combo);
  }

  // exp(-i T_m dt) e_1 via the tridiagonal eigendecomposition; returns the
  // residual estimate beta_m |y_m|.
  double small_exp(int m, double dt, Eigen::VectorXcd& combo) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(alpha_.head(m), beta_.head(m - 1 > 0 ? m - 1 : 0),
                                  Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = solver.eigenvectors();
    Eigen::VectorXcd phases =
        (-kI * dt * solver.eigenvalues().array().cast<cxd>()).exp().matrix();
    combo = q * phases.cwiseProduct(q.row(0).transpose().cast<cxd>());
    return beta_(m - 1) * std::abs(combo(m - 1));
  }

  const SparseHamiltonian* h_;
  EvolveOptions opts_;
  Eigen::MatrixXcd basis_vectors_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd beta_;
};

/// psi(t) = exp(-i H t) psi(0) sampled on `times`; records n_i(t), P(t) and
/// (JC) <sigma_i^z>.  Drift diagnostics: norm, total excitation, and <H>.
/// When `final_state` is given it receives psi(t_max).
inline Trajectory evolve(const SparseHamiltonian& h, const ManyBodyBasis& basis,
                         const Eigen::VectorXcd& psi0,
                         const std::vector<double>& times,
                         const EvolveOptions& opts = {},
                         Eigen::VectorXcd* final_state = nullptr) {
  if (!h.hermitian)
    throw std::invalid_argument("evolve: Hamiltonian must be Hermitian");
  if (h.dimension() != basis.dimension() ||
      psi0.size() != static_cast<Eigen::Index>(basis.dimension()))
    throw std::invalid_argument("evolve: dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("evolve: psi0 must be normalized");
  if (times.empty()) throw std::invalid_argument("evolve: empty time grid");

  const int n_sites = basis.num_sites();
  const std::size_t dim = basis.dimension();

  std::vector<Eigen::VectorXd> occ_tables(n_sites);
  std::vector<Eigen::VectorXd> inv_tables;
  for (int i = 0; i < n_sites; ++i) occ_tables[i] = basis.occupation_table(i);
  if (basis.has_qubits()) {
    inv_tables.resize(n_sites);
    for (int i = 0; i < n_sites; ++i) inv_tables[i] = basis.inversion_table(i);
  }

  Trajectory traj;
  traj.times = times;
  traj.occupations.resize(n_sites, times.size());
  traj.imbalance.resize(times.size());
  if (basis.has_qubits()) traj.qubit_inversion.resize(n_sites, times.size());

  double norm_drift = 0.0, excitation_drift = 0.0, energy_drift = 0.0;
  double excitation0 = 0.0, energy0 = 0.0;

  Eigen::VectorXcd psi = psi0;
  LanczosPropagator prop(h, opts);

  for (std::size_t s = 0; s < times.size(); ++s) {
    if (s > 0) prop.step(psi, times[s] - times[s - 1]);

    Eigen::VectorXd prob = psi.cwiseAbs2();
    Eigen::VectorXd occ(n_sites);
    for (int i = 0; i < n_sites; ++i) occ(i) = occ_tables[i].dot(prob);
    traj.occupations.col(s) = occ;
    traj.imbalance[s] = imbalance_of(occ);

    double excitation = occ.sum();
    if (basis.has_qubits()) {
      for (int i = 0; i < n_sites; ++i) {
        double sz = inv_tables[i].dot(prob);
        traj.qubit_inversion(i, s) = sz;
        excitation += 0.5 * (sz + 1.0);
      }
    }
    if (s == 0) excitation0 = excitation;
    excitation_drift =
        std::max(excitation_drift, std::abs(excitation - excitation0));
    norm_drift = std::max(norm_drift, std::abs(psi.norm() - 1.0));

    if (s % static_cast<std::size_t>(std::max(1, opts.energy_stride)) == 0 ||
        s + 1 == times.size()) {
      double energy = std::real(psi.dot(h.matrix * psi));
      if (s == 0) energy0 = energy;
      energy_drift = std::max(
          energy_drift, std::abs(energy - energy0) /
                            std::max(std::abs(energy0), 1.0));
    }
  }

  traj.drift["norm_drift"] = norm_drift;
  traj.drift["total_excitation_drift"] = excitation_drift;
  traj.drift["energy_rel_drift"] = energy_drift;
  if (final_state) *final_state = psi;
  (void)dim;
  return traj;
}

// --- state-vector checkpoints ------------------------------------------------
// Layout: uint64 dimension, then dimension (re, im) pairs; little-endian
// IEEE-754 doubles throughout.

inline void write_state_checkpoint(const std::string& path,
                                   const Eigen::VectorXcd& psi) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open checkpoint file " + path);
  std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  std::fwrite(&dim, sizeof(dim), 1, f);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    double re = psi(i).real(), im = psi(i).imag();
    std::fwrite(&re, sizeof(double), 1, f);
    std::fwrite(&im, sizeof(double), 1, f);
  }
  std::fclose(f);
}

inline Eigen::VectorXcd read_state_checkpoint(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open checkpoint file " + path);
  std::uint64_t dim = 0;
  if (std::fread(&dim, sizeof(dim), 1, f) != 1) {
    std::fclose(f);
    throw std::runtime_error("truncated checkpoint file " + path);
  }
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < dim; ++i) {
    double re = 0.0, im = 0.0;
    if (std::fread(&re, sizeof(double), 1, f) != 1 ||
        std::fread(&im, sizeof(double), 1, f) != 1) {
      std::fclose(f);
      throw std::runtime_error("truncated checkpoint file " + path);
    }
    psi(static_cast<Eigen::Index>(i)) = cxd(re, im);
  }
  std::fclose(f);
  return psi;
}

}  // namespace qnet
