#include "resonant/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resonant {

double max_relative_residual(const Eigen::MatrixXd &h, const Eigen::VectorXd &values, const Eigen::MatrixXd &vectors) {
  const double norm = std::max(h.norm(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double residual = (h * vectors.col(i) - values(i) * vectors.col(i)).norm();
    worst = std::max(worst, residual / norm);
  }
  return worst;
}

double max_eigenvalue(const SpectrumRecord &spectrum) {
  if (spectrum.size() == 0)
    throw std::invalid_argument("max_eigenvalue of an empty spectrum");
  return spectrum.eigenvalues(spectrum.size() - 1);
}

double integrality_deviation(const Eigen::Ref<const Eigen::VectorXd> &values) {
  double worst = 0.0;
  for (double e : values)
    worst = std::max(worst, std::abs(e - std::round(e)));
  return worst;
}

double integrality_deviation(const SpectrumRecord &spectrum) {
  return integrality_deviation(spectrum.eigenvalues);
}

double default_cluster_tolerance(const SpectrumRecord &spectrum) {
  const double top = spectrum.size() > 0 ? std::abs(max_eigenvalue(spectrum)) : 0.0;
  return 1e-8 * std::max(1.0, top);
}

DegeneracySummary degeneracy_summary(const SpectrumRecord &spectrum, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("degeneracy_summary: tolerance must be positive");
  DegeneracySummary summary;
  summary.cluster_tolerance = tol;

  const auto &e = spectrum.eigenvalues;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= e.size(); ++i) {
    if (i < e.size() && e(i) - e(i - 1) <= tol)
      continue;
    const auto members = e.segment(start, i - start);
    const std::size_t multiplicity = static_cast<std::size_t>(i - start);
    summary.clusters.push_back({members.mean(), multiplicity});
    if (members.cwiseAbs().minCoeff() <= tol)
      summary.zero_multiplicity += multiplicity;
    start = i;
  }
  return summary;
}

DegeneracySummary degeneracy_summary(const SpectrumRecord &spectrum) {
  return degeneracy_summary(spectrum, default_cluster_tolerance(spectrum));
}

InheritanceResult inheritance_check(const SpectrumRecord &small, const SpectrumRecord &large, double tol) {
  InheritanceResult result;
  const auto &a = small.eigenvalues;
  const auto &b = large.eigenvalues;
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    while (j < b.size() && b(j) < a(i) - tol)
      ++j;
    if (j < b.size() && std::abs(b(j) - a(i)) <= tol)
      ++j;
    else
      result.unmatched.push_back(a(i));
  }
  result.inherited = result.unmatched.empty();
  return result;
}

} // namespace resonant
