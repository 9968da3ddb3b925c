#pragma once

#include <stdexcept>
#include <variant>

#include "qnet/basis.hpp"

namespace qnet {

struct HarmonicModel {
  double omega_c = 0.0;
};

struct JaynesCummingsModel {
  double omega_c = 0.0;
  double omega_q = 0.0;
  double coupling_g = 0.0;  // cavity-qubit coupling
};

struct BoseHubbardModel {
  double omega_c = 0.0;
  double interaction_u = 0.0;  // onsite attraction, enters as -(U/2) n^2
};

using UnitModel =
    std::variant<HarmonicModel, JaynesCummingsModel, BoseHubbardModel>;

inline ModelKind model_kind(const UnitModel& m) {
  if (std::holds_alternative<JaynesCummingsModel>(m))
    return ModelKind::JaynesCummings;
  if (std::holds_alternative<BoseHubbardModel>(m)) return ModelKind::BoseHubbard;
  return ModelKind::Harmonic;
}

inline double model_omega_c(const UnitModel& m) {
  return std::visit([](const auto& v) { return v.omega_c; }, m);
}

}  // namespace qnet
