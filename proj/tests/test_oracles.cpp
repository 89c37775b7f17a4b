#include "resonant/errors.hpp"
#include "resonant/hamiltonian.hpp"
#include "resonant/oracles.hpp"
#include "resonant/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace resonant;

TEST_CASE("two_particle_matrix examples") {
  CHECK(two_particle_matrix(CouplingProvider(Family::szego), 3).isApprox(Eigen::Matrix2d::Constant(2.0)));
  CHECK(two_particle_matrix(CouplingProvider(Family::mrs), 3).isApprox(Eigen::Matrix2d::Constant(0.5)));
  const auto lll = two_particle_matrix(CouplingProvider(Family::lll), 1);
  REQUIRE(lll.rows() == 1);
  CHECK(lll(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two_particle_matrix closed-form entries") {
  // MRS: 2 / (1 + M); LLL: sqrt(C(M,I) C(M,J)) / 2^{M-1}
  const int m_level = 9;
  const auto mrs = two_particle_matrix(CouplingProvider(Family::mrs), m_level);
  CHECK((mrs.array() - 2.0 / (1.0 + m_level)).abs().maxCoeff() < 1e-15);
  const auto lll = two_particle_matrix(CouplingProvider(Family::lll), m_level);
  auto binom = [](int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i)
      b = b * (n - k + i) / i;
    return b;
  };
  for (int i = 0; i < lll.rows(); ++i)
    for (int j = 0; j < lll.cols(); ++j)
      CHECK(lll(i, j) == doctest::Approx(std::sqrt(binom(m_level, i) * binom(m_level, j)) / std::pow(2.0, m_level - 1))
                             .epsilon(1e-13));
}

TEST_CASE("two_particle_spectrum closed forms") {
  const auto szego = two_particle_spectrum(Family::szego, 5).values();
  CHECK(szego.size() == 3);
  CHECK(szego(0) == 0.0);
  CHECK(szego(1) == 0.0);
  CHECK(szego(2) == 6.0);

  const auto cf1 = two_particle_spectrum(Family::cf, 1);
  REQUIRE(cf1.eigenvalues.size() == 1);
  CHECK(cf1.eigenvalues[0] == Rational{1, 1});

  const auto cf7 = two_particle_spectrum(Family::cf, 7);
  REQUIRE(cf7.eigenvalues.size() == 4);
  CHECK(cf7.eigenvalues[0] == Rational{1, 28});
  CHECK(cf7.eigenvalues[1] == Rational{1, 15});
  CHECK(cf7.eigenvalues[2] == Rational{1, 6});
  CHECK(cf7.eigenvalues[3] == Rational{1, 1});

  for (int m = 1; m <= 25; m += 2)
    for (Family family : {Family::szego, Family::mrs, Family::cf, Family::lll})
      CHECK(two_particle_spectrum(family, m).eigenvalues.size() == static_cast<std::size_t>(m / 2 + 1));

  CHECK_THROWS_AS(two_particle_spectrum(Family::modcf, 5), UnsupportedFamily);
  CHECK_THROWS_AS(two_particle_spectrum(Family::random, 5), UnsupportedFamily);
  CHECK_THROWS_AS(two_particle_spectrum(Family::cf, 4), std::invalid_argument);
}

TEST_CASE("closed forms agree with the two-particle matrix spectrum") {
  for (Family family : {Family::szego, Family::mrs, Family::cf, Family::lll})
    for (int m = 1; m <= 25; m += 2) {
      const CouplingProvider c(family);
      const BlockMatrixd formula{{2, m}, two_particle_matrix(c, m)};
      const auto numeric = diagonalize(formula).eigenvalues;
      Eigen::VectorXd exact = two_particle_spectrum(family, m).values();
      std::sort(exact.begin(), exact.end());
      CHECK((numeric - exact).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("even-M two-particle matrix equals the assembled block") {
  for (Family family : {Family::szego, Family::cf, Family::lll, Family::modcf})
    for (int m = 0; m <= 24; m += 2) {
      const CouplingProvider c(family);
      const auto block = assemble_block({2, m}, c).entries;
      const auto formula = two_particle_matrix(c, m);
      CHECK((block - formula).cwiseAbs().maxCoeff() <= 1e-13 * block.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("expected_max_eigenvalue") {
  CHECK(expected_max_eigenvalue(Family::szego, {27, 27}) == 1053.0);
  CHECK(expected_max_eigenvalue(Family::cf, {2, 17}) == 1.0);
  for (Family family : {Family::szego, Family::mrs, Family::cf, Family::lll})
    CHECK(expected_max_eigenvalue(family, {1, 9}) == 0.0);
  CHECK_THROWS_AS(expected_max_eigenvalue(Family::random, {3, 3}), UnsupportedFamily);
}

TEST_CASE("expected_max_eigenvalue matches numerics for N, M <= 12") {
  for (Family family : {Family::szego, Family::mrs, Family::cf, Family::lll})
    for (int n = 1; n <= 12; ++n)
      for (int m = 0; m <= 12; ++m) {
        const auto s = diagonalize(assemble_block({n, m}, CouplingProvider(family)));
        CHECK(std::abs(max_eigenvalue(s) - expected_max_eigenvalue(family, {n, m})) <= 1e-8);
      }
}
