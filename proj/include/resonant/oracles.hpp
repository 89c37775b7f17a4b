#ifndef RESONANT_ORACLES_HPP
#define RESONANT_ORACLES_HPP

#include "resonant/couplings.hpp"
#include "resonant/partitions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace resonant {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational &, const Rational &) = default;
};

/// Exact N = 2 spectrum of a closed-form family at odd M.
struct TwoParticleSpectrum {
  Family family;
  int m_level;
  std::vector<Rational> eigenvalues; // ascending

  Eigen::VectorXd values() const;
};

/// The N = 2 block in the basis v_I = |n_I = 1, n_{M-I} = 1>, I = 0 ... floor(M/2):
/// H_IJ = 2 C_{I,M-I,J,M-J}. For even M the state v_{M/2} = |n_{M/2} = 2> carries
/// an extra 1/sqrt(2) in its row and column, so the matrix equals the
/// assembled block for every M.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> two_particle_matrix(const CouplingProvider &couplings,
                                                                         int m_level) {
  using std::sqrt;
  if (m_level < 0)
    throw std::invalid_argument("two_particle_matrix: M must be nonnegative");
  const int size = m_level / 2 + 1;
  auto weight = [&](int i) { return 2 * i == m_level ? Scalar(1) / sqrt(Scalar(2)) : Scalar(1); };
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      h(i, j) = Scalar(2) * weight(i) * weight(j) * Scalar(couplings({i, m_level - i, j, m_level - j}));
  return h;
}

/// Closed forms for M = 2m+1: szego {0 x m, M+1}; mrs and lll {0 x m, 1};
/// cf {1 / ((I+1)(2I+1)) : I = 0 ... m}.
TwoParticleSpectrum two_particle_spectrum(Family family, int m_level);

/// szego (N-1)(N+2M)/2; mrs, cf, lll N(N-1)/2.
double expected_max_eigenvalue(Family family, BlockLabel label);

} // namespace resonant

#endif // RESONANT_ORACLES_HPP
