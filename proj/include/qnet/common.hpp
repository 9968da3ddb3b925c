#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qnet {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cxd kI{0.0, 1.0};

/// ceil(n/2), the connectivity threshold beyond which a ring is a complete graph.
inline int half_ceil(int n) { return (n + 1) / 2; }

/// Formats a double with 17 significant digits so it round-trips exactly.
inline std::string format_roundtrip(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Thrown when a time-stepping kernel fails (NaN, step underflow, trace blowup).
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qnet
