#include "resonant/oracles.hpp"

#include "resonant/errors.hpp"

#include <algorithm>
#include <string>

namespace resonant {

Eigen::VectorXd TwoParticleSpectrum::values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(eigenvalues.size()));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = eigenvalues[i].value();
  return out;
}

TwoParticleSpectrum two_particle_spectrum(Family family, int m_level) {
  if (!has_closed_form(family))
    throw UnsupportedFamily("no closed-form two-particle spectrum for " + std::string(family_name(family)));
  if (m_level < 1 || m_level % 2 == 0)
    throw std::invalid_argument("two_particle_spectrum: M must be odd and positive");

  const int m = (m_level - 1) / 2;
  TwoParticleSpectrum out{family, m_level, {}};
  if (family == Family::cf) {
    for (int i = m; i >= 0; --i)
      out.eigenvalues.push_back({1, static_cast<std::int64_t>(i + 1) * (2 * i + 1)});
    return out;
  }
  out.eigenvalues.assign(static_cast<std::size_t>(m), Rational{0, 1});
  out.eigenvalues.push_back(family == Family::szego ? Rational{m_level + 1, 1} : Rational{1, 1});
  return out;
}

double expected_max_eigenvalue(Family family, BlockLabel label) {
  if (!has_closed_form(family))
    throw UnsupportedFamily("no E_max formula for " + std::string(family_name(family)));
  const double n = label.n_particles;
  const double m = label.m_level;
  if (family == Family::szego)
    return (n - 1.0) * (n + 2.0 * m) / 2.0;
  return n * (n - 1.0) / 2.0;
}

} // namespace resonant
