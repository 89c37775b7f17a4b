#include "oracle_support.hpp"

#include "resonant/errors.hpp"
#include "resonant/partitions.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace resonant;

TEST_CASE("count_partitions reproduces the published block sizes") {
  CHECK(count_partitions({27, 27}) == 3010);
  CHECK(count_partitions({23, 23}) == 1255);
  CHECK(count_partitions({18, 18}) == 385);
  CHECK(count_partitions({20, 20}) == 627);
}

TEST_CASE("count_partitions small cases") {
  CHECK(count_partitions({5, 0}) == 1);
  CHECK(count_partitions({0, 0}) == 1);
  CHECK(count_partitions({0, 3}) == 0);
  CHECK(count_partitions({2, 5}) == 3); // 5, 4+1, 3+2
  CHECK(count_partitions({1, 9}) == 1);
}

TEST_CASE("count_partitions agrees with brute-force enumeration for N, M <= 40") {
  for (int n = 0; n <= 40; ++n)
    for (int m = 0; m <= 40; ++m) {
      const auto expected = oracle::partitions_at_most(n, m).size();
      REQUIRE_MESSAGE(count_partitions({n, m}) == expected, "N=", n, " M=", m);
    }
}

TEST_CASE("count_partitions saturates at N >= M") {
  for (int m = 0; m <= 60; ++m)
    for (int n = m; n <= m + 5; ++n)
      CHECK(count_partitions({n, m}) == count_partitions({m, m}));
}

TEST_CASE("count_partitions range guard") {
  CHECK(count_partitions({400, 400}) == 6727090051741041926ULL);
  CHECK_THROWS_AS(count_partitions({420, 420}), RangeError);
  CHECK_THROWS_AS(count_partitions({2, kMaxCountLevel + 1}), RangeError);
  CHECK_THROWS_AS(count_partitions({-1, 3}), std::invalid_argument);
  // Small N reaches far beyond the N = M overflow point.
  CHECK(count_partitions({2, 10000}) == 5001);
}

TEST_CASE("enumerate_basis canonical order examples") {
  const auto two = enumerate_basis({2, 3});
  REQUIRE(two.size() == 2);
  CHECK(two[0].occupations() == Occupations{1, 0, 0, 1});
  CHECK(two[1].occupations() == Occupations{0, 1, 1, 0});

  const auto single = enumerate_basis({1, 4});
  REQUIRE(single.size() == 1);
  CHECK(single[0].occupations() == Occupations{0, 0, 0, 0, 1});

  const auto three = enumerate_basis({3, 3});
  REQUIRE(three.size() == 3);
  CHECK(three[0].occupations() == Occupations{2, 0, 0, 1});
  CHECK(three[1].occupations() == Occupations{1, 1, 1, 0});
  CHECK(three[2].occupations() == Occupations{0, 3, 0, 0});

  const auto vacuum = enumerate_basis({0, 0});
  REQUIRE(vacuum.size() == 1);
  CHECK(vacuum[0].occupations() == Occupations{0});
  CHECK(enumerate_basis({0, 4}).size() == 0);
}

TEST_CASE("enumerate_basis matches the brute-force set and is strictly decreasing") {
  for (int n = 0; n <= 14; ++n)
    for (int m = 0; m <= 14; ++m) {
      const auto basis = enumerate_basis({n, m});
      REQUIRE(basis.size() == count_partitions({n, m}));

      std::set<Occupations> expected;
      for (const auto &parts : oracle::partitions_at_most(n, m))
        expected.insert(oracle::to_occupations(parts, n, m));
      std::set<Occupations> got;
      for (const auto &s : basis) {
        CHECK(s.particle_number() == n);
        CHECK(s.level() == m);
        CHECK(s.modes() == static_cast<std::size_t>(m) + 1);
        got.insert(s.occupations());
      }
      CHECK(got == expected);

      for (std::size_t i = 1; i < basis.size(); ++i) {
        const auto &a = basis[i - 1].occupations();
        const auto &b = basis[i].occupations();
        CHECK(std::lexicographical_compare(b.rbegin(), b.rend(), a.rbegin(), a.rend()));
      }
      for (std::size_t i = 0; i < basis.size(); ++i)
        CHECK(basis.find(basis[i].occupations()) == i);
    }
}

TEST_CASE("enumerate_basis is deterministic") {
  const auto a = enumerate_basis({9, 13});
  const auto b = enumerate_basis({9, 13});
  CHECK(a.states() == b.states());
}

TEST_CASE("BasisIndex lookup rejects foreign vectors") {
  const auto basis = enumerate_basis({3, 4});
  CHECK_FALSE(basis.find(Occupations{3, 0, 0, 0, 0}).has_value());
  CHECK_FALSE(basis.find(Occupations{2, 0, 0, 1}).has_value());
}

TEST_CASE("asymptotic_count_fixed_n") {
  CHECK(asymptotic_count_fixed_n({2, 1000}) == doctest::Approx(500.0).epsilon(1e-14));
  CHECK(asymptotic_count_fixed_n({1, 7}) == doctest::Approx(1.0).epsilon(1e-14));
  const double ratio = static_cast<double>(count_partitions({3, 10000})) / asymptotic_count_fixed_n({3, 10000});
  CHECK(std::abs(ratio - 1.0) < 0.05);
  CHECK_THROWS(asymptotic_count_fixed_n({3, 0}));
}

TEST_CASE("asymptotic_count_total") {
  CHECK(asymptotic_count_total(1) ==
        doctest::Approx(std::exp(M_PI * std::sqrt(2.0 / 3.0)) / (4.0 * std::sqrt(3.0))).epsilon(1e-14));
  const double exact27 = static_cast<double>(count_partitions({27, 27}));
  CHECK(std::abs(exact27 / asymptotic_count_total(27) - 1.0) < 0.15);

  auto error = [](int m) {
    return std::abs(static_cast<double>(count_partitions({m, m})) / asymptotic_count_total(m) - 1.0);
  };
  CHECK(error(200) < error(50));
  CHECK_THROWS(asymptotic_count_total(0));
}
