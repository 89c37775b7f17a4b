#include "resonant/partitions.hpp"

#include "resonant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace resonant {

std::string to_string(const BlockLabel &label) {
  return "(N=" + std::to_string(label.n_particles) + ", M=" + std::to_string(label.m_level) + ")";
}

FockState::FockState(Occupations occupations) : occ_(std::move(occupations)) {
  if (occ_.empty())
    throw std::invalid_argument("FockState: occupation vector must hold at least mode 0");
  if (std::any_of(occ_.begin(), occ_.end(), [](int n) { return n < 0; }))
    throw std::invalid_argument("FockState: negative occupation number");
}

int FockState::particle_number() const noexcept {
  return std::accumulate(occ_.begin(), occ_.end(), 0);
}

int FockState::level() const noexcept {
  int m = 0;
  for (std::size_t k = 1; k < occ_.size(); ++k)
    m += static_cast<int>(k) * occ_[k];
  return m;
}

BasisIndex::BasisIndex(BlockLabel label, std::vector<FockState> states)
    : label_(label), states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    auto [it, inserted] = lookup_.emplace(states_[i].occupations(), i);
    if (!inserted)
      throw std::invalid_argument("BasisIndex: duplicate state");
  }
}

std::optional<std::size_t> BasisIndex::find(const Occupations &occupations) const {
  auto it = lookup_.find(occupations);
  if (it == lookup_.end())
    return std::nullopt;
  return it->second;
}

namespace {

void check_label(BlockLabel label) {
  if (label.n_particles < 0 || label.m_level < 0)
    throw std::invalid_argument("block label must be nonnegative: " + to_string(label));
}

} // namespace

std::uint64_t count_partitions(BlockLabel label) {
  check_label(label);
  const int n = label.n_particles;
  const int m = label.m_level;
  if (m > kMaxCountLevel)
    throw RangeError("count_partitions: M exceeds supported range " + to_string(label));
  if (m == 0)
    return 1;
  if (n == 0)
    return 0;

  // Partitions into at most N parts are conjugate to partitions with parts
  // bounded by N; the 1-D table below realizes p_N(M) = p_{N-1}(M) + p_N(M-N)
  // one part size at a time.
  constexpr std::uint64_t limit = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint64_t> table(static_cast<std::size_t>(m) + 1, 0);
  table[0] = 1;
  const int max_part = std::min(n, m);
  for (int part = 1; part <= max_part; ++part) {
    for (int level = part; level <= m; ++level) {
      std::uint64_t sum = table[level] + table[level - part];
      if (sum > limit)
        throw RangeError("count_partitions: p_N(M) overflows int64 at " + to_string(label));
      table[level] = sum;
    }
  }
  return table[m];
}

BasisIndex enumerate_basis(BlockLabel label) {
  check_label(label);
  const int n = label.n_particles;
  const int m = label.m_level;

  std::vector<FockState> states;
  if (m > 0 && n == 0)
    return BasisIndex(label, std::move(states));
  states.reserve(count_partitions(label));

  Occupations occ(static_cast<std::size_t>(m) + 1, 0);
  // Descend from the highest mode; at each mode try the largest admissible
  // occupation first, which yields lexicographically decreasing order.
  std::function<void(int, int, int)> descend = [&](int mode, int level_left, int parts_left) {
    if (mode == 0) {
      if (level_left == 0) {
        occ[0] = parts_left;
        states.emplace_back(occ);
        occ[0] = 0;
      }
      return;
    }
    if (level_left > mode * parts_left)
      return;
    const int most = std::min(level_left / mode, parts_left);
    for (int count = most; count >= 0; --count) {
      occ[mode] = count;
      descend(mode - 1, level_left - count * mode, parts_left - count);
    }
    occ[mode] = 0;
  };
  descend(m, m, n);
  return BasisIndex(label, std::move(states));
}

double asymptotic_count_fixed_n(BlockLabel label) {
  check_label(label);
  if (label.n_particles < 1 || label.m_level < 1)
    throw std::invalid_argument("asymptotic_count_fixed_n requires N >= 1 and M >= 1");
  const double n = label.n_particles;
  const double log_value =
      (n - 1.0) * std::log(static_cast<double>(label.m_level)) - std::lgamma(n + 1.0) - std::lgamma(n);
  return std::exp(log_value);
}

double asymptotic_count_total(int m) {
  if (m < 1)
    throw std::invalid_argument("asymptotic_count_total requires m >= 1");
  const double x = m;
  return std::exp(std::numbers::pi * std::sqrt(2.0 * x / 3.0)) / (4.0 * x * std::sqrt(3.0));
}

} // namespace resonant
