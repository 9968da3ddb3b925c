#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnet/common.hpp"

namespace qnet {

enum class ModelKind { Harmonic, JaynesCummings, BoseHubbard };

enum class BasisTruncation {
  Full,        // every occupation pattern up to the per-site cap
  FixedTotal,  // total excitation sum(n_i + s_i) = M
  MaxTotal,    // total excitation <= M (open systems without drive)
};

// Indexed occupation-number basis over N sites, each holding up to Np bosons
// and (JC) one qubit bit.  States are bit-packed into 64-bit keys (photon
// count in the low bits of each site field, qubit bit above) and stored
// sorted, so key -> index lookup is O(log dim).
class ManyBodyBasis {
 public:
  static constexpr std::size_t kDefaultDimensionCap = 2'000'000;

  static ManyBodyBasis build(int num_sites, int max_occupation,
                             bool with_qubits, BasisTruncation mode,
                             int total_excitation = 0,
                             std::size_t dimension_cap = kDefaultDimensionCap) {
    if (num_sites < 1)
      throw std::invalid_argument("ManyBodyBasis: need at least one site");
    if (max_occupation < 1)
      throw std::invalid_argument("ManyBodyBasis: per-site cap must be >= 1");
    if (mode != BasisTruncation::Full && total_excitation < 0)
      throw std::invalid_argument("ManyBodyBasis: total excitation must be >= 0");

    ManyBodyBasis b;
    b.num_sites_ = num_sites;
    b.max_occupation_ = max_occupation;
    b.with_qubits_ = with_qubits;
    b.mode_ = mode;
    b.total_excitation_ = total_excitation;

    b.photon_bits_ = 1;
    while ((1 << b.photon_bits_) <= max_occupation) ++b.photon_bits_;
    b.bits_per_site_ = b.photon_bits_ + (with_qubits ? 1 : 0);
    if (b.bits_per_site_ * num_sites > 64)
      throw std::invalid_argument(
          "ManyBodyBasis: state encoding exceeds 64 bits");

    const std::uint64_t dim = b.count_dimension();
    if (dim > dimension_cap)
      throw std::runtime_error(
          "ManyBodyBasis: required dimension " + std::to_string(dim) +
          " exceeds cap " + std::to_string(dimension_cap));

    b.keys_.reserve(dim);
    b.enumerate(num_sites - 1, 0, 0);
    if (b.keys_.size() != dim)
      throw std::logic_error("ManyBodyBasis: enumeration/count mismatch");
    return b;
  }

  std::size_t dimension() const { return keys_.size(); }
  int num_sites() const { return num_sites_; }
  int max_occupation() const { return max_occupation_; }
  bool has_qubits() const { return with_qubits_; }
  BasisTruncation truncation() const { return mode_; }

  std::uint64_t key_of(std::size_t index) const { return keys_[index]; }

  std::optional<std::size_t> index_of_key(std::uint64_t key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys_.begin());
  }

  int photon_of_key(std::uint64_t key, int site) const {
    return static_cast<int>((key >> (site * bits_per_site_)) & photon_mask_());
  }

  int qubit_of_key(std::uint64_t key, int site) const {
    if (!with_qubits_) return 0;
    return static_cast<int>(
        (key >> (site * bits_per_site_ + photon_bits_)) & 1ull);
  }

  std::uint64_t key_with_photon(std::uint64_t key, int site, int n) const {
    const int shift = site * bits_per_site_;
    return (key & ~(photon_mask_() << shift)) |
           (static_cast<std::uint64_t>(n) << shift);
  }

  std::uint64_t key_with_qubit(std::uint64_t key, int site, int s) const {
    const int shift = site * bits_per_site_ + photon_bits_;
    return (key & ~(1ull << shift)) | (static_cast<std::uint64_t>(s) << shift);
  }

  int photon(std::size_t index, int site) const {
    return photon_of_key(keys_[index], site);
  }
  int qubit(std::size_t index, int site) const {
    return qubit_of_key(keys_[index], site);
  }

  int total_excitation_of(std::size_t index) const {
    int m = 0;
    for (int i = 0; i < num_sites_; ++i)
      m += photon(index, i) + qubit(index, i);
    return m;
  }

  /// Per-site photon numbers over the whole basis; diagonal observables never
  /// materialize a^dagger a as a matrix.
  Eigen::VectorXd occupation_table(int site) const {
    Eigen::VectorXd v(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) v(i) = photon(i, site);
    return v;
  }

  /// Per-site qubit inversion 2 s - 1 over the whole basis.
  Eigen::VectorXd inversion_table(int site) const {
    Eigen::VectorXd v(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) v(i) = 2 * qubit(i, site) - 1;
    return v;
  }

 private:
  std::uint64_t photon_mask_() const { return (1ull << photon_bits_) - 1; }

  // Number of (n, s) choices at one site contributing excitation e.
  std::uint64_t site_ways(int e) const {
    if (!with_qubits_) return (e >= 0 && e <= max_occupation_) ? 1 : 0;
    std::uint64_t w = 0;
    if (e >= 0 && e <= max_occupation_) ++w;      // (e, 0)
    if (e >= 1 && e - 1 <= max_occupation_) ++w;  // (e-1, 1)
    return w;
  }

  std::uint64_t count_dimension() const {
    constexpr std::uint64_t kSaturate = 1ull << 62;
    if (mode_ == BasisTruncation::Full) {
      std::uint64_t local = static_cast<std::uint64_t>(max_occupation_ + 1)
                            << (with_qubits_ ? 1 : 0);
      std::uint64_t dim = 1;
      for (int i = 0; i < num_sites_; ++i) {
        if (dim > kSaturate / local) return kSaturate;
        dim *= local;
      }
      return dim;
    }
    const int m = total_excitation_;
    const int e_max = max_occupation_ + (with_qubits_ ? 1 : 0);
    std::vector<std::uint64_t> ways(m + 1, 0);
    ways[0] = 1;
    for (int site = 0; site < num_sites_; ++site) {
      std::vector<std::uint64_t> next(m + 1, 0);
      for (int tot = 0; tot <= m; ++tot) {
        if (ways[tot] == 0) continue;
        for (int e = 0; e + tot <= m && e <= e_max; ++e) {
          std::uint64_t add = ways[tot] * site_ways(e);
          next[tot + e] = std::min(next[tot + e] + add, kSaturate);
        }
      }
      ways.swap(next);
    }
    if (mode_ == BasisTruncation::FixedTotal) return ways[m];
    std::uint64_t dim = 0;
    for (int tot = 0; tot <= m; ++tot)
      dim = std::min(dim + ways[tot], kSaturate);
    return dim;
  }

  // Depth-first over sites, most significant site first, photon then qubit
  // ascending: emits keys in increasing numeric order.
  void enumerate(int site, std::uint64_t key, int used) {
    const int budget_needed =
        (mode_ == BasisTruncation::Full) ? 0 : total_excitation_;
    const int e_site_max = max_occupation_ + (with_qubits_ ? 1 : 0);
    if (site < 0) {
      if (mode_ == BasisTruncation::FixedTotal && used != total_excitation_)
        return;
      keys_.push_back(key);
      return;
    }
    for (int s = 0; s <= (with_qubits_ ? 1 : 0); ++s) {
      for (int n = 0; n <= max_occupation_; ++n) {
        const int e = n + s;
        if (mode_ != BasisTruncation::Full) {
          if (used + e > budget_needed) continue;
          if (mode_ == BasisTruncation::FixedTotal &&
              used + e + site * e_site_max < total_excitation_)
            continue;  // cannot reach M with the remaining sites
        }
        std::uint64_t k = key_with_photon(key, site, n);
        if (s) k = key_with_qubit(k, site, 1);
        enumerate(site - 1, k, used + e);
      }
    }
  }

  int num_sites_ = 0;
  int max_occupation_ = 0;
  bool with_qubits_ = false;
  BasisTruncation mode_ = BasisTruncation::Full;
  int total_excitation_ = 0;
  int photon_bits_ = 0;
  int bits_per_site_ = 0;
  std::vector<std::uint64_t> keys_;
};

/// Builds the basis for a unit model: full truncated space, or the fixed
/// total-excitation sector when `sector` is given.
inline ManyBodyBasis build_basis(
    int num_sites, int max_occupation, ModelKind kind,
    std::optional<int> sector = std::nullopt,
    std::size_t dimension_cap = ManyBodyBasis::kDefaultDimensionCap) {
  const bool qubits = (kind == ModelKind::JaynesCummings);
  if (sector)
    return ManyBodyBasis::build(num_sites, max_occupation, qubits,
                                BasisTruncation::FixedTotal, *sector,
                                dimension_cap);
  return ManyBodyBasis::build(num_sites, max_occupation, qubits,
                              BasisTruncation::Full, 0, dimension_cap);
}

/// |Np, 0, ..., 0> with every qubit down.
inline Eigen::VectorXcd initial_fock_state(const ManyBodyBasis& basis,
                                           int test_site, int np) {
  if (np > basis.max_occupation())
    throw std::invalid_argument("initial_fock_state: Np above per-site cap");
  std::uint64_t key = basis.key_with_photon(0, test_site, np);
  auto idx = basis.index_of_key(key);
  if (!idx)
    throw std::invalid_argument(
        "initial_fock_state: state lies outside the truncated basis");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dimension());
  psi(static_cast<Eigen::Index>(*idx)) = 1.0;
  return psi;
}

}  // namespace qnet
