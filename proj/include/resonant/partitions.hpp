#ifndef RESONANT_PARTITIONS_HPP
#define RESONANT_PARTITIONS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resonant {

/// Labels one invariant block of the Hamiltonian: total particle number N and
/// total level M.
struct BlockLabel {
  int n_particles = 0;
  int m_level = 0;

  friend bool operator==(const BlockLabel &, const BlockLabel &) = default;
  friend auto operator<=>(const BlockLabel &, const BlockLabel &) = default;
};

std::string to_string(const BlockLabel &label);

/// Occupation numbers (n_0, ..., n_M) of a Fock state.
using Occupations = std::vector<int>;

/// A Fock state inside an (N,M)-block. The occupation vector always has length
/// M+1, so modes above M are implicitly empty.
class FockState {
public:
  FockState() = default;
  explicit FockState(Occupations occupations);

  const Occupations &occupations() const noexcept { return occ_; }
  int operator[](std::size_t k) const { return occ_[k]; }
  std::size_t modes() const noexcept { return occ_.size(); }

  int particle_number() const noexcept;
  int level() const noexcept;
  BlockLabel label() const noexcept { return {particle_number(), level()}; }

  friend bool operator==(const FockState &, const FockState &) = default;

private:
  Occupations occ_;
};

/// The Fock basis of one block in canonical order, with exact reverse lookup.
///
/// Canonical order is lexicographically decreasing when the occupation vector
/// is read from mode M down to mode 0. The first state therefore puts as many
/// particles as possible into the highest mode.
class BasisIndex {
public:
  BasisIndex() = default;
  BasisIndex(BlockLabel label, std::vector<FockState> states);

  const BlockLabel &label() const noexcept { return label_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FockState &operator[](std::size_t i) const { return states_[i]; }
  const std::vector<FockState> &states() const noexcept { return states_; }

  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  std::optional<std::size_t> find(const Occupations &occupations) const;

private:
  BlockLabel label_;
  std::vector<FockState> states_;
  std::map<Occupations, std::size_t> lookup_;
};

/// Number of partitions of M into at most N parts, p_N(M), in exact 64-bit
/// arithmetic. Throws RangeError when the result (or M itself) is out of range.
std::uint64_t count_partitions(BlockLabel label);

/// Largest level accepted by count_partitions. Counts with N >= M overflow
/// int64 a little above M = 400; smaller N reaches much further.
inline constexpr int kMaxCountLevel = 1'000'000;

BasisIndex enumerate_basis(BlockLabel label);

/// Fixed-N large-M asymptotics M^{N-1} / (N! (N-1)!). Requires N >= 1, M >= 1.
double asymptotic_count_fixed_n(BlockLabel label);

/// Leading Hardy-Ramanujan term exp(pi sqrt(2m/3)) / (4 m sqrt 3). Requires m >= 1.
double asymptotic_count_total(int m);

} // namespace resonant

#endif // RESONANT_PARTITIONS_HPP
