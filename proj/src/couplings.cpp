#include "resonant/couplings.hpp"

#include "resonant/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace resonant {

Quartet canonical_quartet(const Quartet &q) {
  std::pair<int, int> create = std::minmax(q.n, q.m);
  std::pair<int, int> annihilate = std::minmax(q.k, q.l);
  if (annihilate < create)
    std::swap(create, annihilate);
  return {create.first, create.second, annihilate.first, annihilate.second};
}

std::string_view family_name(Family family) {
  switch (family) {
  case Family::szego: return "szego";
  case Family::mrs: return "mrs";
  case Family::cf: return "cf";
  case Family::lll: return "lll";
  case Family::modcf: return "modcf";
  case Family::random: return "random";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::szego, Family::mrs, Family::cf, Family::lll, Family::modcf, Family::random})
    if (family_name(f) == name)
      return f;
  return std::nullopt;
}

bool has_closed_form(Family family) {
  return family == Family::szego || family == Family::mrs || family == Family::cf || family == Family::lll;
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lll_coupling(const Quartet &q) {
  for (int index : {q.n, q.m, q.k, q.l})
    if (index > kMaxLllIndex)
      throw RangeError("lll coupling: mode index exceeds " + std::to_string(kMaxLllIndex));
  // ((n+m+k+l)/2)! = (n+m)! under resonance.
  const double s = q.n + q.m;
  const double log_value = std::lgamma(s + 1.0) - s * std::numbers::ln2 -
                           0.5 * (std::lgamma(q.n + 1.0) + std::lgamma(q.m + 1.0) +
                                  std::lgamma(q.k + 1.0) + std::lgamma(q.l + 1.0));
  const double value = std::exp(log_value);
  if (!std::isfinite(log_value) || !std::isfinite(value))
    throw RangeError("lll coupling: log-space evaluation left the exponent range");
  return value;
}

double cf_root(const Quartet &q) {
  return std::sqrt((1.0 + q.n) * (1.0 + q.m) * (1.0 + q.k) * (1.0 + q.l));
}

} // namespace

double keyed_uniform(std::uint64_t seed, const Quartet &canonical) {
  std::uint64_t h = splitmix64(seed);
  for (int index : {canonical.n, canonical.m, canonical.k, canonical.l})
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(index)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

CouplingProvider::CouplingProvider(Family family, std::uint64_t seed, std::optional<bool> normalize_c0000)
    : family_(family), seed_(seed), normalize_(normalize_c0000.value_or(family == Family::random)) {
  if (normalize_) {
    const double c0 = raw({0, 0, 0, 0});
    if (!(c0 > 0.0))
      throw DegenerateError("cannot normalize couplings: C(0,0,0,0) = 0");
    scale_ = c0;
  }
}

double CouplingProvider::raw(const Quartet &quartet) const {
  if (!quartet.resonant())
    throw std::invalid_argument("coupling requested for non-resonant quartet");
  if (quartet.n < 0 || quartet.m < 0 || quartet.k < 0 || quartet.l < 0)
    throw std::invalid_argument("coupling requested for negative mode index");
  // Evaluate on the orbit representative so every image rounds identically.
  const Quartet q = canonical_quartet(quartet);

  switch (family_) {
  case Family::szego:
    return 1.0;
  case Family::mrs:
    return 1.0 / (1.0 + (q.n + q.m + q.k + q.l) / 2.0);
  case Family::cf:
    return (1.0 + std::min({q.n, q.m, q.k, q.l})) / cf_root(q);
  case Family::lll:
    return lll_coupling(q);
  case Family::modcf:
    return (1.0 + (q.n + q.m + q.k + q.l) / 4.0) / cf_root(q);
  case Family::random:
    return keyed_uniform(seed_, q);
  }
  throw std::logic_error("unknown coupling family");
}

double CouplingProvider::operator()(const Quartet &q) const {
  const double value = raw(q);
  return normalize_ ? value / scale_ : value;
}

} // namespace resonant
