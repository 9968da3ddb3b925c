#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qnet/common.hpp"
#include "qnet/json_util.hpp"
#include "qnet/rng.hpp"

namespace qnet {

// Ring of N cavity units coupled by hopping J.  Couplings reach the D nearest
// neighbours on each side, or every other unit.  A range D >= ceil(N/2)
// already connects every pair, so it is canonicalized to all-to-all.
struct Connectivity {
  enum class Kind { FiniteRange, AllToAll };

  Kind kind = Kind::AllToAll;
  int range = 0;  // D, finite range only

  static Connectivity all_to_all() { return Connectivity{Kind::AllToAll, 0}; }

  static Connectivity finite_range(int d) {
    if (d < 1) throw std::invalid_argument("Connectivity: range must be >= 1");
    return Connectivity{Kind::FiniteRange, d};
  }

  bool is_all_to_all_for(int num_sites) const {
    return kind == Kind::AllToAll || range >= half_ceil(num_sites);
  }

  bool operator==(const Connectivity&) const = default;
};

struct DisorderSpec {
  double delta_omega = 0.0;    // half-width of onsite cavity-frequency disorder
  double delta_hopping = 0.0;  // half-width of hopping disorder

  bool is_clean() const { return delta_omega == 0.0 && delta_hopping == 0.0; }

  void validate() const {
    if (delta_omega < 0.0)
      throw std::invalid_argument("DisorderSpec: delta_omega must be >= 0");
    if (delta_hopping < 0.0)
      throw std::invalid_argument("DisorderSpec: delta_J must be >= 0");
  }
};

struct NetworkSpec {
  int num_sites = 2;     // N
  double hopping = 1.0;  // J, units of energy (hbar = 1)
  Connectivity connectivity = Connectivity::all_to_all();
  DisorderSpec disorder;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_sites < 2)
      throw std::invalid_argument("NetworkSpec: N must be >= 2");
    if (hopping < 0.0)
      throw std::invalid_argument("NetworkSpec: J must be >= 0");
    if (connectivity.kind == Connectivity::Kind::FiniteRange &&
        connectivity.range < 1)
      throw std::invalid_argument("NetworkSpec: D must be >= 1");
    disorder.validate();
  }
};

// One draw of the uniform disorder.  epsilon_bond is exactly symmetric, zero
// on the diagonal and on pairs outside the connectivity set.
struct DisorderRealization {
  Eigen::VectorXd epsilon_site;  // onsite shifts, length N
  Eigen::MatrixXd epsilon_bond;  // hopping shifts, N x N

  static DisorderRealization clean(int num_sites) {
    DisorderRealization r;
    r.epsilon_site = Eigen::VectorXd::Zero(num_sites);
    r.epsilon_bond = Eigen::MatrixXd::Zero(num_sites, num_sites);
    return r;
  }
};

/// Hop offsets d such that sites i and i+d (mod N) are coupled.  Finite range
/// D yields {+-1,...,+-D} mod N with duplicates removed; all-to-all yields
/// every nonzero offset.
inline std::vector<int> neighbor_offsets(const NetworkSpec& spec) {
  spec.validate();
  const int n = spec.num_sites;
  std::vector<bool> present(n, false);
  if (spec.connectivity.is_all_to_all_for(n)) {
    for (int d = 1; d < n; ++d) present[d] = true;
  } else {
    for (int d = 1; d <= spec.connectivity.range; ++d) {
      present[d % n] = true;
      present[(n - d) % n] = true;
    }
  }
  std::vector<int> offsets;
  for (int d = 1; d < n; ++d)
    if (present[d]) offsets.push_back(d);
  return offsets;
}

namespace detail {

inline std::vector<bool> offset_table(const NetworkSpec& spec) {
  std::vector<bool> table(spec.num_sites, false);
  for (int d : neighbor_offsets(spec)) table[d] = true;
  return table;
}

}  // namespace detail

/// Draws one disorder realization.  Deterministic given the generator state;
/// bonds outside the connectivity set stay exactly zero.
inline DisorderRealization sample_disorder(const NetworkSpec& spec,
                                           SplitMix64& rng) {
  spec.validate();
  const int n = spec.num_sites;
  DisorderRealization r = DisorderRealization::clean(n);
  for (int i = 0; i < n; ++i)
    r.epsilon_site(i) = rng.uniform_symmetric(spec.disorder.delta_omega);
  const auto connected = detail::offset_table(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!connected[(j - i) % n]) continue;
      double e = rng.uniform_symmetric(spec.disorder.delta_hopping);
      r.epsilon_bond(i, j) = e;
      r.epsilon_bond(j, i) = e;
    }
  }
  return r;
}

inline DisorderRealization sample_disorder(const NetworkSpec& spec) {
  SplitMix64 rng(spec.seed);
  return sample_disorder(spec, rng);
}

/// N x N Hermitian single-particle matrix: h_ii = omega_c + eps_i and
/// h_ij = -(J + eps_ij) on connected pairs, 0 elsewhere.
inline Eigen::MatrixXcd single_particle_hamiltonian(
    const NetworkSpec& spec, double omega_c,
    const DisorderRealization& realization) {
  spec.validate();
  const int n = spec.num_sites;
  if (realization.epsilon_site.size() != n ||
      realization.epsilon_bond.rows() != n ||
      realization.epsilon_bond.cols() != n)
    throw std::invalid_argument(
        "single_particle_hamiltonian: realization does not match N");

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const auto connected = detail::offset_table(spec);
  for (int i = 0; i < n; ++i) {
    h(i, i) = omega_c + realization.epsilon_site(i);
    for (int j = 0; j < n; ++j) {
      if (i == j || !connected[((j - i) % n + n) % n]) continue;
      h(i, j) = -(spec.hopping + realization.epsilon_bond(i, j));
    }
  }
  return h;
}

// --- JSON (de)serialization -------------------------------------------------
//
// {"N":..,"J":..,"connectivity":{"type":"finite_range","D":..}|{"type":"all_to_all"},
//  "disorder":{"delta_omega":..,"delta_J":..},"seed":..}

inline nlohmann::ordered_json to_json(const Connectivity& c) {
  nlohmann::ordered_json j;
  if (c.kind == Connectivity::Kind::AllToAll) {
    j["type"] = "all_to_all";
  } else {
    j["type"] = "finite_range";
    j["D"] = c.range;
  }
  return j;
}

inline Connectivity connectivity_from_json(const nlohmann::json& j,
                                           const std::string& context) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "all_to_all") return Connectivity::all_to_all();
    throw ConfigError(context, "unknown connectivity '" + s + "'");
  }
  if (!j.is_object()) throw ConfigError(context, "must be an object");
  reject_unknown_keys(j, {"type", "D"}, context);
  std::string type = j.value("type", "");
  if (type == "all_to_all") return Connectivity::all_to_all();
  if (type == "finite_range") {
    if (!j.contains("D")) throw ConfigError(context + ".D", "missing for finite_range");
    int d = j.at("D").get<int>();
    if (d < 1) throw ConfigError(context + ".D", "must be >= 1");
    return Connectivity::finite_range(d);
  }
  throw ConfigError(context + ".type", "must be 'finite_range' or 'all_to_all'");
}

inline nlohmann::ordered_json to_json(const NetworkSpec& spec) {
  nlohmann::ordered_json j;
  j["N"] = spec.num_sites;
  j["J"] = spec.hopping;
  j["connectivity"] = to_json(spec.connectivity);
  j["disorder"] = {{"delta_omega", spec.disorder.delta_omega},
                   {"delta_J", spec.disorder.delta_hopping}};
  j["seed"] = spec.seed;
  return j;
}

inline NetworkSpec network_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw ConfigError("network", "must be an object");
  reject_unknown_keys(j, {"N", "J", "connectivity", "disorder", "seed"}, "");
  NetworkSpec spec;
  spec.num_sites = static_cast<int>(require_number(j, "N", ""));
  spec.hopping = require_number(j, "J", "");
  if (j.contains("connectivity"))
    spec.connectivity = connectivity_from_json(j.at("connectivity"), "connectivity");
  if (j.contains("disorder")) {
    const auto& d = j.at("disorder");
    reject_unknown_keys(d, {"delta_omega", "delta_J"}, "disorder");
    spec.disorder.delta_omega = number_or(d, "delta_omega", 0.0, "disorder");
    spec.disorder.delta_hopping = number_or(d, "delta_J", 0.0, "disorder");
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  spec.validate();
  return spec;
}

}  // namespace qnet
