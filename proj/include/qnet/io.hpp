#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/common.hpp"
#include "qnet/diagnostics.hpp"

namespace qnet {

inline void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create directory " + dir + ": " +
                             ec.message());
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << body;
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

/// Trajectory CSV.  Columns: t, P[, Z], n_0..n_{N-1}[, sz_0..sz_{N-1}];
/// every value carries 17 significant digits so diffs are meaningful; missing
/// Z samples are written as nan.
inline std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.num_sites();
  std::string out;
  out.reserve(64 * traj.num_samples() * (n + 2));

  out += "t,P";
  if (traj.has_z()) out += ",Z";
  for (int i = 0; i < n; ++i) out += ",n_" + std::to_string(i);
  if (traj.has_qubits())
    for (int i = 0; i < n; ++i) out += ",sz_" + std::to_string(i);
  out += "\n";

  for (int s = 0; s < traj.num_samples(); ++s) {
    out += format_roundtrip(traj.times[s]);
    out += ",";
    out += format_roundtrip(traj.imbalance[s]);
    if (traj.has_z()) {
      out += ",";
      out += std::isnan(traj.z_ratio[s]) ? "nan"
                                         : format_roundtrip(traj.z_ratio[s]);
    }
    for (int i = 0; i < n; ++i) {
      out += ",";
      out += format_roundtrip(traj.occupations(i, s));
    }
    if (traj.has_qubits()) {
      for (int i = 0; i < n; ++i) {
        out += ",";
        out += format_roundtrip(traj.qubit_inversion(i, s));
      }
    }
    out += "\n";
  }
  return out;
}

inline void write_trajectory_csv(const std::string& path,
                                 const Trajectory& traj) {
  write_text_file(path, trajectory_csv(traj));
}

/// Machine-readable failure report printed by the CLI on nonzero exit.
inline nlohmann::ordered_json error_json(const std::string& message,
                                         const std::string& field = "") {
  nlohmann::ordered_json j;
  j["error"]["message"] = message;
  if (!field.empty()) j["error"]["field"] = field;
  return j;
}

}  // namespace qnet
