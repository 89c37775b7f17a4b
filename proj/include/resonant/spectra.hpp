#ifndef RESONANT_SPECTRA_HPP
#define RESONANT_SPECTRA_HPP

#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/hamiltonian.hpp"
#include "resonant/partitions.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace resonant {

/// Sorted eigenvalues of one block together with their provenance.
struct SpectrumRecord {
  BlockLabel label;
  std::optional<Family> family;
  std::uint64_t seed = 0;
  Eigen::VectorXd eigenvalues; // ascending
  double solver_tolerance = 0.0;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

struct Cluster {
  double value; // mean of the members
  std::size_t multiplicity;
};

struct DegeneracySummary {
  std::vector<Cluster> clusters;
  double cluster_tolerance = 0.0;
  std::size_t zero_multiplicity = 0;
};

struct InheritanceResult {
  bool inherited = false;
  std::vector<double> unmatched; // eigenvalues of the smaller block without partner
};

/// Relative residual bound every eigenpair must satisfy.
inline constexpr double kResidualBound = 1e-10;

namespace detail {

template <typename Scalar>
void require_symmetric(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &h, const BlockLabel &label) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("matrix of block " + to_string(label) + " is not square");
  if (h.size() > 0 && !(h.array() == h.transpose().array()).all())
    throw std::invalid_argument("matrix of block " + to_string(label) + " is not symmetric");
}

} // namespace detail

/// All eigenvalues of a symmetric block, ascending. Only the eigenvalues are
/// computed; use eigen_decomposition when vectors are needed.
template <typename Scalar>
SpectrumRecord diagonalize(const BlockMatrix<Scalar> &matrix, std::optional<Family> family = std::nullopt,
                           std::uint64_t seed = 0) {
  using Matrix = typename BlockMatrix<Scalar>::Matrix;
  detail::require_symmetric<Scalar>(matrix.entries, matrix.label);

  SpectrumRecord record{matrix.label, family, seed, Eigen::VectorXd(matrix.dim()), 0.0};
  if (matrix.dim() == 0)
    return record;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigensolver did not converge for block " + to_string(matrix.label));
  record.eigenvalues = solver.eigenvalues().template cast<double>();
  record.solver_tolerance = kResidualBound * static_cast<double>(matrix.entries.norm());
  return record;
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
template <typename Scalar>
std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_decomposition(const BlockMatrix<Scalar> &matrix) {
  using Matrix = typename BlockMatrix<Scalar>::Matrix;
  detail::require_symmetric<Scalar>(matrix.entries, matrix.label);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix.entries, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigensolver did not converge for block " + to_string(matrix.label));
  return {solver.eigenvalues().template cast<double>(), solver.eigenvectors().template cast<double>()};
}

/// Largest ||H v - E v|| / ||H|| over the given eigenpairs.
double max_relative_residual(const Eigen::MatrixXd &h, const Eigen::VectorXd &values, const Eigen::MatrixXd &vectors);

double max_eigenvalue(const SpectrumRecord &spectrum);

/// max |E - round(E)| over the spectrum.
double integrality_deviation(const SpectrumRecord &spectrum);
double integrality_deviation(const Eigen::Ref<const Eigen::VectorXd> &values);

/// Default clustering threshold 1e-8 max(1, |E_max|).
double default_cluster_tolerance(const SpectrumRecord &spectrum);

/// Single-linkage clustering of the sorted spectrum: a gap larger than tol
/// starts a new cluster. The zero cluster is the one containing |E| <= tol.
DegeneracySummary degeneracy_summary(const SpectrumRecord &spectrum, double tol);
DegeneracySummary degeneracy_summary(const SpectrumRecord &spectrum);

/// Greedy two-pointer match of every eigenvalue of small into large, each large
/// eigenvalue consumed at most once. Near-degenerate crossings can defeat the
/// greedy sweep, so the unmatched values are returned for inspection.
InheritanceResult inheritance_check(const SpectrumRecord &small, const SpectrumRecord &large, double tol = 1e-8);

} // namespace resonant

#endif // RESONANT_SPECTRA_HPP
