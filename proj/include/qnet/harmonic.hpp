#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qnet/common.hpp"
#include "qnet/diagnostics.hpp"
#include "qnet/network.hpp"

namespace qnet {

struct HarmonicParams {
  int num_sites = 2;  // N
  Connectivity connectivity = Connectivity::all_to_all();
  double hopping = 1.0;    // J
  double omega_c = 0.0;    // drops out of every occupation observable
  int initial_bosons = 1;  // Np, loaded into the test unit

  void validate() const {
    if (num_sites < 2) throw std::invalid_argument("HarmonicParams: N >= 2");
    if (hopping < 0.0) throw std::invalid_argument("HarmonicParams: J >= 0");
    if (initial_bosons < 1)
      throw std::invalid_argument("HarmonicParams: Np >= 1");
  }
};

/// Mode dispersion factor f(k) = sum_{d=1}^{D} cos(2 pi k d / N), evaluated in
/// closed form as cos((D+1) pi k / N) sin(D pi k / N) / sin(pi k / N).
/// The k = 0 mode is excluded; it carries the shift D instead.
inline double f_of_k(int num_sites, int range, int k) {
  if (range < 1 || range >= half_ceil(num_sites))
    throw std::invalid_argument("f_of_k: need 1 <= D < ceil(N/2)");
  if (k < 1 || k > num_sites - 1)
    throw std::invalid_argument("f_of_k: need 1 <= k <= N-1");
  const double x = kPi * static_cast<double>(k) / num_sites;
  return std::cos((range + 1) * x) * std::sin(range * x) / std::sin(x);
}

// Finite-range imbalance
//
//   P(t) = (2 Np / N^2) { 1 + sum_{k,k'>=1} exp[i 2 J t (f(k') - f(k))]
//                           + 2 sum_{k>=1} cos[2 J t (f(k) - D)] } - Np.
//
// The double sum is a squared modulus in disguise, so its imaginary part has
// to vanish; it is accumulated literally (O(N^2) per evaluation) and checked.
// f(k) is tabulated once per parameter set.
class FiniteRangeImbalance {
 public:
  explicit FiniteRangeImbalance(const HarmonicParams& params) : params_(params) {
    params.validate();
    if (params.connectivity.kind != Connectivity::Kind::FiniteRange ||
        params.connectivity.is_all_to_all_for(params.num_sites))
      throw std::invalid_argument(
          "FiniteRangeImbalance: requires D < ceil(N/2); use the all-to-all "
          "form instead");
    f_.resize(params.num_sites - 1);
    for (int k = 1; k < params.num_sites; ++k)
      f_[k - 1] = f_of_k(params.num_sites, params.connectivity.range, k);
  }

  double operator()(double t) const {
    const int n = params_.num_sites;
    const double two_jt = 2.0 * params_.hopping * t;
    const int d = params_.connectivity.range;

    cxd double_sum = 0.0;
    for (int k = 0; k < n - 1; ++k) {
      for (int kp = 0; kp < n - 1; ++kp) {
        double_sum += std::exp(kI * (two_jt * (f_[kp] - f_[k])));
      }
    }
    if (std::abs(double_sum.imag()) > 1e-10)
      throw std::runtime_error(
          "FiniteRangeImbalance: mode double sum lost hermiticity");

    double cos_sum = 0.0;
    for (int k = 0; k < n - 1; ++k)
      cos_sum += std::cos(two_jt * (f_[k] - d));

    const double np = params_.initial_bosons;
    return 2.0 * np / (static_cast<double>(n) * n) *
               (1.0 + double_sum.real() + 2.0 * cos_sum) -
           np;
  }

 private:
  HarmonicParams params_;
  std::vector<double> f_;
};

inline double imbalance_finite_range(const HarmonicParams& params, double t) {
  return FiniteRangeImbalance(params)(t);
}

/// All-to-all imbalance P(t) = (Np/N^2) [1 + (N-1)(N + 4 cos(N J t) - 3)],
/// periodic with period 2 pi / (N J).
inline double imbalance_all_to_all(const HarmonicParams& params, double t) {
  params.validate();
  const double n = params.num_sites;
  const double np = params.initial_bosons;
  return np / (n * n) *
         (1.0 + (n - 1.0) * (n + 4.0 * std::cos(n * params.hopping * t) - 3.0));
}

inline double all_to_all_period(int num_sites, double hopping) {
  return 2.0 * kPi / (num_sites * hopping);
}

/// Closed-form degree of localization for the all-to-all harmonic network:
/// eta = 1 - 4/N + 4/N^2.  Monotone in N with limit 1.
inline double eta_all_to_all_closed_form(int num_sites) {
  if (num_sites < 2)
    throw std::invalid_argument("eta_all_to_all_closed_form: N >= 2");
  const double n = num_sites;
  return 1.0 - 4.0 / n + 4.0 / (n * n);
}

/// C(0) = I + Np |0><0| in the ordering C_ij = <a_i a_j^dagger>; this choice
/// makes P = 2 C_00 - tr C + (N - 2) reproduce P(0) = Np.
inline Eigen::MatrixXcd initial_correlation_matrix(int num_sites, double np) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(num_sites, num_sites);
  c(0, 0) += np;
  return c;
}

/// Extracts P = 2 C_00 - tr C + (N - 2) from a correlation matrix.
inline double imbalance_from_correlation(const Eigen::MatrixXcd& c) {
  const int n = static_cast<int>(c.rows());
  return 2.0 * c(0, 0).real() - c.trace().real() + (n - 2);
}

namespace detail {

inline void require_hermitian(const Eigen::MatrixXcd& h, const char* who) {
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

}  // namespace detail

// Exact single-particle propagation C(t) = e^{-iht} C(0) e^{iht} through the
// eigendecomposition of h.  Diagonalizing once keeps the oracle free of
// time-stepping accumulation error.
class CorrelationPropagator {
 public:
  explicit CorrelationPropagator(const Eigen::MatrixXcd& h) {
    detail::require_hermitian(h, "CorrelationPropagator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("CorrelationPropagator: eigensolver failed");
    evec_ = solver.eigenvectors();
    eval_ = solver.eigenvalues();
    weight0_ = evec_.adjoint().col(0);  // V^dagger e_0
  }

  int num_sites() const { return static_cast<int>(eval_.size()); }

  /// e^{-iht} as a dense matrix.
  Eigen::MatrixXcd propagator(double t) const {
    Eigen::VectorXcd phase =
        (-kI * t * eval_.array().cast<cxd>()).exp().matrix();
    return evec_ * phase.asDiagonal() * evec_.adjoint();
  }

  Eigen::MatrixXcd propagate(const Eigen::MatrixXcd& c0, double t) const {
    Eigen::MatrixXcd u = propagator(t);
    return u * c0 * u.adjoint();
  }

  /// Column (e^{-iht})_{:,0}: single-particle amplitude profile of an
  /// excitation that started on the test site.
  Eigen::VectorXcd test_site_column(double t) const {
    Eigen::VectorXcd phase =
        (-kI * t * eval_.array().cast<cxd>()).exp().matrix();
    return evec_ * phase.cwiseProduct(weight0_);
  }

  /// P(t) for Np bosons initially in the test unit (all others vacuum).
  double imbalance(double np, double t) const {
    return np * (2.0 * std::norm(test_site_column(t)(0)) - 1.0);
  }

 private:
  Eigen::MatrixXcd evec_;
  Eigen::VectorXd eval_;
  Eigen::VectorXcd weight0_;
};

inline Eigen::MatrixXcd propagate_correlation_matrix(const Eigen::MatrixXcd& h,
                                                     const Eigen::MatrixXcd& c0,
                                                     double t) {
  return CorrelationPropagator(h).propagate(c0, t);
}

/// Exact trajectory of a harmonic network (any h: clean, disordered, finite
/// range): n_i(t) = Np |(e^{-iht})_{i0}|^2.
inline Trajectory harmonic_trajectory(const Eigen::MatrixXcd& h, double np,
                                      const std::vector<double>& times) {
  CorrelationPropagator prop(h);
  const int n = prop.num_sites();
  Trajectory traj;
  traj.times = times;
  traj.occupations.resize(n, times.size());
  traj.imbalance.resize(times.size());

  double occupation_drift = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    Eigen::VectorXcd u = prop.test_site_column(times[s]);
    Eigen::VectorXd occ = np * u.cwiseAbs2();
    traj.occupations.col(s) = occ;
    traj.imbalance[s] = imbalance_of(occ);
    occupation_drift = std::max(occupation_drift, std::abs(occ.sum() - np));
  }
  traj.drift["total_occupation_drift"] = occupation_drift / np;
  return traj;
}

/// Golden-section refinement of a continuous P(t) minimum inside a bracket,
/// used to lift eta above the sampling-grid resolution.
inline double refine_imbalance_minimum(
    const std::function<double(double)>& p_of_t, double t_lo, double t_hi,
    double* t_at_min = nullptr) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = t_lo, b = t_hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = p_of_t(c), fd = p_of_t(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(b));
       ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = p_of_t(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = p_of_t(d);
    }
  }
  double t_best = (fc < fd) ? c : d;
  if (t_at_min) *t_at_min = t_best;
  return std::min(fc, fd);
}

}  // namespace qnet
