#ifndef RESONANT_HAMILTONIAN_HPP
#define RESONANT_HAMILTONIAN_HPP

#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/partitions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace resonant {

/// Matrix of H restricted to one (N,M)-block, in the order of the basis it was
/// assembled from.
template <typename Scalar>
struct BlockMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BlockLabel label;
  Matrix entries;

  Eigen::Index dim() const noexcept { return entries.rows(); }
};

using BlockMatrixd = BlockMatrix<double>;

struct AssemblyOptions {
  /// Worker threads for column assembly; results do not depend on this.
  unsigned threads = 1;
  /// Largest accepted block dimension.
  std::size_t dim_cap = 20000;
  /// Evaluate only j->i with i >= j and mirror. When false every column is
  /// evaluated independently, which is only useful as a Hermiticity check.
  bool mirror = true;
};

struct LadderImage {
  FockState state;
  double amplitude;
};

namespace detail {

// alpha_n^+ alpha_m^+ alpha_k alpha_l applied in place. Returns 0 and leaves
// occ unspecified when an annihilation hits an empty mode.
template <typename Scalar>
Scalar apply_in_place(Occupations &occ, const Quartet &q) {
  using std::sqrt;
  Scalar amplitude(1);
  for (int mode : {q.l, q.k}) {
    if (occ[mode] == 0)
      return Scalar(0);
    amplitude *= sqrt(Scalar(occ[mode]));
    --occ[mode];
  }
  for (int mode : {q.m, q.n}) {
    ++occ[mode];
    amplitude *= sqrt(Scalar(occ[mode]));
  }
  return amplitude;
}

template <typename Scalar>
void assemble_column(const BasisIndex &basis, const CouplingProvider &couplings, std::size_t source,
                     std::vector<Scalar> &column, std::vector<int> &occupied, Occupations &work) {
  const FockState &state = basis[source];
  const int top = static_cast<int>(state.modes()) - 1;
  std::fill(column.begin(), column.end(), Scalar(0));

  occupied.clear();
  for (int mode = 0; mode <= top; ++mode)
    if (state[mode] > 0)
      occupied.push_back(mode);

  // Unordered annihilation pairs (k <= l) and creation splittings (n <= m) of
  // s = k + l. Each class stands for mult ordered quartets with equal value.
  for (std::size_t a = 0; a < occupied.size(); ++a) {
    for (std::size_t b = a; b < occupied.size(); ++b) {
      const int k = occupied[a];
      const int l = occupied[b];
      if (k == l && state[k] < 2)
        continue;
      const int s = k + l;
      for (int n = std::max(0, s - top); n <= s / 2; ++n) {
        const int m = s - n;
        const Quartet q{n, m, k, l};
        work = state.occupations();
        const Scalar amplitude = apply_in_place<Scalar>(work, q);
        const auto target = basis.find(work);
        if (!target)
          throw std::logic_error("quartet image left the block " + to_string(basis.label()));
        const int mult = (k == l ? 1 : 2) * (n == m ? 1 : 2);
        column[*target] += Scalar(0.5) * Scalar(mult) * Scalar(couplings(q)) * amplitude;
      }
    }
  }
}

} // namespace detail

/// Image of |state> under alpha_n^+ alpha_m^+ alpha_k alpha_l: annihilate l,
/// then k, then create m, then n. Empty when an annihilation hits the vacuum.
inline std::optional<LadderImage> apply_quartet(const FockState &state, const Quartet &q) {
  if (!q.resonant())
    throw std::invalid_argument("apply_quartet: non-resonant quartet");
  const int top = static_cast<int>(state.modes()) - 1;
  for (int index : {q.n, q.m, q.k, q.l})
    if (index < 0 || index > top)
      throw std::invalid_argument("apply_quartet: mode index outside the block");
  Occupations occ = state.occupations();
  const double amplitude = detail::apply_in_place<double>(occ, q);
  if (amplitude == 0.0)
    return std::nullopt;
  return LadderImage{FockState(std::move(occ)), amplitude};
}

/// Assemble H over an explicit basis (any order). Entry (i, j) is
/// <basis[i]| H |basis[j]>.
template <typename Scalar = double>
BlockMatrix<Scalar> assemble_block(const BasisIndex &basis, const CouplingProvider &couplings,
                                   const AssemblyOptions &options = {}) {
  const std::size_t dim = basis.size();
  if (dim > options.dim_cap)
    throw SizeError("block " + to_string(basis.label()) + " has dimension " + std::to_string(dim) +
                    " above the cap " + std::to_string(options.dim_cap));

  BlockMatrix<Scalar> result{basis.label(), BlockMatrix<Scalar>::Matrix::Zero(dim, dim)};
  auto &h = result.entries;

  auto work_on = [&](std::size_t first, std::size_t stride) {
    std::vector<Scalar> column(dim);
    std::vector<int> occupied;
    Occupations work;
    for (std::size_t j = first; j < dim; j += stride) {
      detail::assemble_column<Scalar>(basis, couplings, j, column, occupied, work);
      for (std::size_t i = options.mirror ? j : 0; i < dim; ++i)
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = column[i];
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(dim, 1));
  if (threads == 1) {
    work_on(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
          try {
            work_on(t, threads);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (const auto &error : errors)
      if (error)
        std::rethrow_exception(error);
  }

  if (options.mirror)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      for (Eigen::Index i = j + 1; i < h.rows(); ++i)
        h(j, i) = h(i, j);
  return result;
}

template <typename Scalar = double>
BlockMatrix<Scalar> assemble_block(BlockLabel label, const CouplingProvider &couplings,
                                   const AssemblyOptions &options = {}) {
  const std::uint64_t dim = count_partitions(label);
  if (dim > options.dim_cap)
    throw SizeError("block " + to_string(label) + " has dimension " + std::to_string(dim) +
                    " above the cap " + std::to_string(options.dim_cap));
  return assemble_block<Scalar>(enumerate_basis(label), couplings, options);
}

/// Fraction of entries that are not exactly zero.
template <typename Derived>
double nonzero_fraction(const Eigen::MatrixBase<Derived> &matrix) {
  if (matrix.size() == 0)
    return 0.0;
  const auto nonzero = (matrix.array() != typename Derived::Scalar(0)).count();
  return static_cast<double>(nonzero) / static_cast<double>(matrix.size());
}

} // namespace resonant

#endif // RESONANT_HAMILTONIAN_HPP
