#ifndef RESONANT_COUPLINGS_HPP
#define RESONANT_COUPLINGS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace resonant {

/// Mode indices of one term alpha_n^+ alpha_m^+ alpha_k alpha_l, with n+m = k+l.
struct Quartet {
  int n = 0;
  int m = 0;
  int k = 0;
  int l = 0;

  bool resonant() const noexcept { return n + m == k + l; }

  friend bool operator==(const Quartet &, const Quartet &) = default;
  friend auto operator<=>(const Quartet &, const Quartet &) = default;
};

/// Representative of the 8-element orbit generated by swapping within the
/// creation pair, within the annihilation pair, and exchanging the two pairs.
Quartet canonical_quartet(const Quartet &q);

enum class Family { szego, mrs, cf, lll, modcf, random };

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

/// True for the families with known closed-form two-particle spectra and E_max.
bool has_closed_form(Family family);

/// Interaction coefficients C_nmkl of one resonant system.
///
/// Providers are immutable values. The random family draws each orbit's value
/// once from a SplitMix64 chain keyed on (seed, canonical quartet), so the
/// coefficients are reproducible without storing a table and automatically
/// carry the index symmetries.
class CouplingProvider {
public:
  /// Normalization defaults to on for the random family and off otherwise.
  explicit CouplingProvider(Family family, std::uint64_t seed = 0,
                            std::optional<bool> normalize_c0000 = std::nullopt);

  Family family() const noexcept { return family_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool normalized() const noexcept { return normalize_; }

  /// C(q) after optional rescaling so that C(0,0,0,0) = 1.
  double operator()(const Quartet &q) const;

  /// C(q) before normalization.
  double raw(const Quartet &q) const;

private:
  Family family_;
  std::uint64_t seed_;
  bool normalize_;
  double scale_ = 1.0; // raw C(0,0,0,0) when normalizing
};

/// Uniform [0,1) draw for a canonical quartet; exposed for tests.
double keyed_uniform(std::uint64_t seed, const Quartet &canonical);

/// Largest mode index accepted by the log-space LLL formula.
inline constexpr int kMaxLllIndex = 1 << 24;

} // namespace resonant

#endif // RESONANT_COUPLINGS_HPP
