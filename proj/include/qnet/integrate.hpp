#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnet/common.hpp"

namespace qnet {

struct IntegratorConfig {
  enum class Method { FixedRk4, AdaptiveRk45 };

  Method method = Method::FixedRk4;
  double dt = 1e-3;     // fixed-step size (units of 1/J)
  double rtol = 1e-9;   // adaptive only
  double atol = 1e-12;  // adaptive only

  void validate() const {
    if (dt <= 0.0) throw std::invalid_argument("IntegratorConfig: dt > 0");
    if (rtol <= 0.0 || atol <= 0.0)
      throw std::invalid_argument("IntegratorConfig: tolerances > 0");
  }
};

namespace detail {

inline void check_finite(const Eigen::VectorXcd& y, double t) {
  if (!y.allFinite())
    throw IntegrationError("integration produced NaN/Inf at t = " +
                           std::to_string(t));
}

}  // namespace detail

// Classical RK4 with a step count fixed per sampling interval, so a given
// configuration is bit-reproducible.  rhs(y, dy) must be autonomous;
// observe(sample_index, y) fires at every grid time including t = 0.
template <typename Rhs, typename Observer>
void integrate_rk4(Rhs&& rhs, Eigen::VectorXcd& y,
                   const std::vector<double>& times, double max_dt,
                   Observer&& observe) {
  if (times.empty()) return;
  const Eigen::Index n = y.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);

  observe(0, y);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double span = times[s] - times[s - 1];
    const int steps = std::max(1, static_cast<int>(std::ceil(span / max_dt - 1e-12)));
    const double h = span / steps;
    for (int i = 0; i < steps; ++i) {
      rhs(y, k1);
      tmp = y + (0.5 * h) * k1;
      rhs(tmp, k2);
      tmp = y + (0.5 * h) * k2;
      rhs(tmp, k3);
      tmp = y + h * k3;
      rhs(tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    detail::check_finite(y, times[s]);
    observe(s, y);
  }
}

// Dormand-Prince 5(4) embedded pair with PI-free basic step control.  Steps
// are clamped to the sample grid so observations land on exact grid times.
template <typename Rhs, typename Observer>
void integrate_rk45(Rhs&& rhs, Eigen::VectorXcd& y,
                    const std::vector<double>& times, double rtol, double atol,
                    Observer&& observe) {
  if (times.empty()) return;
  const Eigen::Index n = y.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXcd y5(n), tmp(n);

  // Butcher tableau
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = times.front();
  double h = std::min(1e-2, (times.back() - times.front()) / 100.0);
  bool have_k1 = false;

  observe(0, y);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double t_target = times[s];
    while (t < t_target - 1e-14 * std::max(1.0, std::abs(t_target))) {
      bool clamped = false;
      if (t + h >= t_target) {
        h = t_target - t;
        clamped = true;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw IntegrationError("adaptive step size underflow at t = " +
                               std::to_string(t));

      if (!have_k1) rhs(y, k1);
      tmp = y + h * (a21 * k1);
      rhs(tmp, k2);
      tmp = y + h * (a31 * k1 + a32 * k2);
      rhs(tmp, k3);
      tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(tmp, k4);
      tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(tmp, k5);
      tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(tmp, k6);
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(y5, k7);

      tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
        double r = std::abs(tmp(i)) / sc;
        err += r * r;
      }
      err = std::sqrt(err / static_cast<double>(n));

      if (err <= 1.0) {
        t += h;
        y = y5;
        k1 = k7;  // FSAL
        have_k1 = true;
        detail::check_finite(y, t);
      } else {
        have_k1 = false;
      }
      double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(factor, 0.2, 5.0);
      if (clamped && err <= 1.0) break;
    }
    t = t_target;
    observe(s, y);
  }
}

}  // namespace qnet
