#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qnet/basis.hpp"
#include "qnet/common.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/quantum.hpp"

namespace qnet {

struct OpenSystemRates {
  double kappa = 0.0;      // cavity dissipation
  double gamma = 0.0;      // qubit decay
  double gamma_phi = 0.0;  // qubit dephasing (sigma^z dissipator, verbatim)

  void validate(bool has_qubits) const {
    if (kappa < 0.0 || gamma < 0.0 || gamma_phi < 0.0)
      throw std::invalid_argument("OpenSystemRates: rates must be >= 0");
    if (!has_qubits && (gamma != 0.0 || gamma_phi != 0.0))
      throw std::invalid_argument(
          "OpenSystemRates: a network without qubits requires gamma = "
          "gamma_phi = 0");
  }
};

struct DensityMatrix {
  Eigen::MatrixXcd mat;

  static DensityMatrix pure(const Eigen::VectorXcd& psi) {
    DensityMatrix rho;
    rho.mat = psi * psi.adjoint();
    return rho;
  }

  double trace_real() const { return mat.trace().real(); }

  double hermiticity_deviation() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        mat, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
};

// Local Lindblad generator
//   drho/dt = -i [H, rho] + kappa sum_j L[a_j] + gamma sum_j L[sigma_j^-]
//                         + gamma_phi sum_j L[sigma_j^z]
// with L[A] = (2 A rho A^dag - A^dag A rho - rho A^dag A) / 2.
//
// The anticommutator halves and the sigma^z dissipator are diagonal in the
// occupation basis, so they fold into one precomputed elementwise damping
// coefficient; only the a_j / sigma_j^- gain terms need scatter maps.
class LindbladPropagator {
 public:
  LindbladPropagator(const ManyBodyBasis& basis, const SparseHamiltonian& h,
                     const OpenSystemRates& rates)
      : basis_(&basis), h_(&h), rates_(rates) {
    rates.validate(basis.has_qubits());
    if (!h.hermitian)
      throw std::invalid_argument("LindbladPropagator: H must be Hermitian");
    if (h.dimension() != basis.dimension())
      throw std::invalid_argument("LindbladPropagator: dimension mismatch");

    const std::size_t dim = basis.dimension();
    const int n_sites = basis.num_sites();

    // gain maps |I> -> amp |lower(I)> for each site's jump operator
    if (rates.kappa > 0.0) {
      photon_jump_.resize(n_sites);
      for (int j = 0; j < n_sites; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
          const std::uint64_t key = basis.key_of(i);
          const int n = basis.photon_of_key(key, j);
          if (n < 1) continue;
          auto tgt = basis.index_of_key(basis.key_with_photon(key, j, n - 1));
          if (!tgt) continue;
          photon_jump_[j].push_back(
              {static_cast<int>(i), static_cast<int>(*tgt), std::sqrt(n)});
        }
      }
    }
    if (rates.gamma > 0.0 && basis.has_qubits()) {
      qubit_jump_.resize(n_sites);
      for (int j = 0; j < n_sites; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
          const std::uint64_t key = basis.key_of(i);
          if (basis.qubit_of_key(key, j) != 1) continue;
          auto tgt = basis.index_of_key(basis.key_with_qubit(key, j, 0));
          if (!tgt) continue;
          qubit_jump_[j].push_back(
              {static_cast<int>(i), static_cast<int>(*tgt), 1.0});
        }
      }
    }

    // damping(I, J) = (D_I + D_J)/2 + gamma_phi (N_sites - Phi_IJ), where
    // D_I = sum_j kappa n_j + gamma s_j and Phi_IJ = sum_j z_j(I) z_j(J)
    Eigen::VectorXd loss = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd z(basis.has_qubits() ? n_sites : 0, basis.has_qubits() ? dim : 0);
    for (std::size_t i = 0; i < dim; ++i) {
      double d = 0.0;
      for (int j = 0; j < n_sites; ++j) {
        d += rates.kappa * basis.photon(i, j);
        if (basis.has_qubits()) {
          d += rates.gamma * basis.qubit(i, j);
          z(j, i) = 2 * basis.qubit(i, j) - 1;
        }
      }
      loss(i) = d;
    }
    damping_.resize(dim, dim);
    for (std::size_t jcol = 0; jcol < dim; ++jcol) {
      for (std::size_t irow = 0; irow < dim; ++irow) {
        double c = 0.5 * (loss(irow) + loss(jcol));
        if (rates.gamma_phi > 0.0 && basis.has_qubits())
          c += rates.gamma_phi *
               (n_sites - z.col(irow).dot(z.col(jcol)));
        damping_(irow, jcol) = c;
      }
    }
  }

  /// drho/dt; traceless and Hermiticity-preserving by construction.
  void apply_rhs(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    out.noalias() = h_->matrix * rho;
    out.noalias() -= rho * h_->matrix;
    out *= -kI;
    out.array() -= damping_.array() * rho.array();
    if (rates_.kappa > 0.0) scatter_gain(rho, out, photon_jump_, rates_.kappa);
    if (rates_.gamma > 0.0) scatter_gain(rho, out, qubit_jump_, rates_.gamma);
  }

  Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != static_cast<Eigen::Index>(basis_->dimension()) ||
        rho.cols() != rho.rows())
      throw std::invalid_argument("LindbladPropagator: rho dimension mismatch");
    Eigen::MatrixXcd out(rho.rows(), rho.cols());
    apply_rhs(rho, out);
    return out;
  }

  /// RK4 on the density matrix with per-step symmetrization.  Records
  /// n_j(t), P(t) and Z(t) = P / sum n_j (NaN below `z_floor`), plus trace /
  /// hermiticity / positivity diagnostics.  Trace drift beyond 1e-6 aborts.
  Trajectory evolve(const Eigen::MatrixXcd& rho0,
                    const std::vector<double>& times, double max_dt,
                    double z_floor = 1e-6) const {
    const std::size_t dim = basis_->dimension();
    if (rho0.rows() != static_cast<Eigen::Index>(dim) || rho0.cols() != rho0.rows())
      throw std::invalid_argument("evolve_open: rho0 dimension mismatch");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-8)
      throw std::invalid_argument("evolve_open: rho0 must have unit trace");
    if (times.empty()) throw std::invalid_argument("evolve_open: empty grid");
    if (max_dt <= 0.0) throw std::invalid_argument("evolve_open: dt > 0");

    const int n_sites = basis_->num_sites();
    std::vector<Eigen::VectorXd> occ_tables(n_sites);
    std::vector<Eigen::VectorXd> inv_tables;
    for (int i = 0; i < n_sites; ++i)
      occ_tables[i] = basis_->occupation_table(i);
    if (basis_->has_qubits()) {
      inv_tables.resize(n_sites);
      for (int i = 0; i < n_sites; ++i)
        inv_tables[i] = basis_->inversion_table(i);
    }

    Trajectory traj;
    traj.times = times;
    traj.occupations.resize(n_sites, times.size());
    traj.imbalance.resize(times.size());
    traj.z_ratio.assign(times.size(),
                        std::numeric_limits<double>::quiet_NaN());
    if (basis_->has_qubits())
      traj.qubit_inversion.resize(n_sites, times.size());

    Eigen::MatrixXcd rho = rho0;
    Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim);
    Eigen::MatrixXcd tmp(dim, dim);

    double trace_drift = 0.0, herm_dev = 0.0, min_eig = 0.0;
    const std::size_t eig_stride =
        std::max<std::size_t>(1, times.size() / 16);

    for (std::size_t s = 0; s < times.size(); ++s) {
      if (s > 0) {
        const double span = times[s] - times[s - 1];
        const int steps =
            std::max(1, static_cast<int>(std::ceil(span / max_dt - 1e-12)));
        const double h = span / steps;
        for (int i = 0; i < steps; ++i) {
          apply_rhs(rho, k1);
          tmp = rho + (0.5 * h) * k1;
          apply_rhs(tmp, k2);
          tmp = rho + (0.5 * h) * k2;
          apply_rhs(tmp, k3);
          tmp = rho + h * k3;
          apply_rhs(tmp, k4);
          rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          // symmetrize, logging the deviation it removed
          tmp = 0.5 * (rho + rho.adjoint());
          herm_dev = std::max(herm_dev, (rho - tmp).cwiseAbs().maxCoeff());
          rho.swap(tmp);
        }
        if (!rho.allFinite())
          throw IntegrationError("evolve_open: NaN at t = " +
                                 std::to_string(times[s]));
      }

      const double trace = rho.trace().real();
      trace_drift = std::max(trace_drift, std::abs(trace - 1.0));
      if (trace_drift > 1e-6)
        throw IntegrationError(
            "evolve_open: trace drift " + std::to_string(trace_drift) +
            " exceeded 1e-6 at t = " + std::to_string(times[s]));

      Eigen::VectorXd pops = rho.diagonal().real();
      Eigen::VectorXd occ(n_sites);
      for (int i = 0; i < n_sites; ++i) occ(i) = occ_tables[i].dot(pops);
      traj.occupations.col(s) = occ;
      const double p = imbalance_of(occ);
      traj.imbalance[s] = p;
      const double total = occ.sum();
      if (total >= z_floor) traj.z_ratio[s] = p / total;
      if (basis_->has_qubits())
        for (int i = 0; i < n_sites; ++i)
          traj.qubit_inversion(i, s) = inv_tables[i].dot(pops);

      if (s % eig_stride == 0 || s + 1 == times.size()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            rho, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, solver.eigenvalues().minCoeff());
      }
    }

    traj.drift["trace_drift"] = trace_drift;
    traj.drift["hermiticity_deviation"] = herm_dev;
    traj.drift["min_eigenvalue"] = min_eig;
    return traj;
  }

 private:
  struct JumpEntry {
    int src;
    int tgt;
    double amp;
  };

  void scatter_gain(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                    const std::vector<std::vector<JumpEntry>>& jumps,
                    double rate) const {
    for (const auto& site : jumps) {
      for (const auto& col : site) {
        const double rc = rate * col.amp;
        for (const auto& row : site) {
          out(row.tgt, col.tgt) += rc * row.amp * rho(row.src, col.src);
        }
      }
    }
  }

  const ManyBodyBasis* basis_;
  const SparseHamiltonian* h_;
  OpenSystemRates rates_;
  std::vector<std::vector<JumpEntry>> photon_jump_;
  std::vector<std::vector<JumpEntry>> qubit_jump_;
  Eigen::MatrixXd damping_;
};

/// One-shot RHS evaluation, mostly for tests and small checks.
inline Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho,
                                     const SparseHamiltonian& h,
                                     const OpenSystemRates& rates,
                                     const ManyBodyBasis& basis) {
  return LindbladPropagator(basis, h, rates).rhs(rho);
}

}  // namespace qnet
