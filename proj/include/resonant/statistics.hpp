#ifndef RESONANT_STATISTICS_HPP
#define RESONANT_STATISTICS_HPP

#include "resonant/partitions.hpp"
#include "resonant/spectra.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resonant {

enum class BinMode { equal_width, equal_count };

std::string_view bin_mode_name(BinMode mode);
std::optional<BinMode> parse_bin_mode(std::string_view name);

/// Probability-normalized histogram: sum of density * width is 1.
struct Histogram {
  std::vector<double> edges;     // ascending, size bins + 1
  std::vector<double> densities; // size bins
  std::size_t count = 0;
  BinMode mode = BinMode::equal_width;

  std::size_t bins() const noexcept { return densities.size(); }
  double width(std::size_t bin) const { return edges[bin + 1] - edges[bin]; }
  double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
  double total_mass() const;
};

/// Smoothing scale: an explicit positive value, or round(sqrt(n)) when empty.
int resolve_delta(std::optional<int> delta, std::size_t samples);

/// Histogram over [lo, hi]. Equal-width mode uses ceil(n / delta) bins;
/// equal-count mode puts delta consecutive sorted samples in each bin, merging
/// groups that would produce a zero-width bin.
Histogram make_histogram(std::span<const double> samples, double lo, double hi, int delta,
                         BinMode mode = BinMode::equal_width);

/// E / E_max for every eigenvalue. Throws DegenerateError when E_max <= 0.
std::vector<double> normalized_eigenvalues(const SpectrumRecord &spectrum);

/// Histogram of E / E_max over [min(0, E_min / E_max), 1].
Histogram normalized_eigenvalue_histogram(const SpectrumRecord &spectrum, std::optional<int> delta = std::nullopt,
                                          BinMode mode = BinMode::equal_width);

inline constexpr double kEulerGamma = 0.5772156649015329;

struct GumbelParams {
  double mu = 0.0;
  double beta = 1.0;
};

struct GaussianParams {
  double mean = 0.0;
  double sigma = 1.0;
};

/// Moment-matched Gumbel: beta = sqrt(6 var) / pi, mu = mean - gamma beta.
/// Needs at least 10 samples with nonzero variance.
GumbelParams fit_gumbel(std::span<const double> samples);
/// Same fit using the histogram's bin-center moments.
GumbelParams fit_gumbel(const Histogram &histogram);
GaussianParams fit_gaussian(std::span<const double> samples);

double gumbel_density(double x, const GumbelParams &params);
double gumbel_cdf(double x, const GumbelParams &params);
double gaussian_density(double x, const GaussianParams &params);

/// L2 distance between a density and the histogram's step function over the
/// histogram's support.
double l2_distance(const Histogram &histogram, const std::function<double(double)> &density);

/// Unfolded nearest-neighbour spacings, normalized to unit mean.
struct UnfoldedSpacings {
  std::vector<double> values;
  int delta = 0;
  BlockLabel label;
  double degenerate_fraction = 0.0;
};

/// Gaps at or below this fraction of the spectral spread count as exact ties.
inline constexpr double kTieFraction = 1e-9;

/// Fraction of adjacent gaps of a sorted spectrum that are ties.
double degenerate_fraction(std::span<const double> sorted);

/// Local-window unfolding. With 1-based I = delta+1 ... dim-delta-1,
/// s_I = (E_{I+1} - E_I) / (E_{I+delta} - E_{I-delta}), then divided by the
/// sample mean. Requires dim > 2 delta + 2; throws WindowError on a window
/// of zero width.
UnfoldedSpacings unfold(std::span<const double> sorted, std::optional<int> delta = std::nullopt,
                        BlockLabel label = {});
UnfoldedSpacings unfold(const SpectrumRecord &spectrum, std::optional<int> delta = std::nullopt);

enum class Reference { poisson, wigner };

double reference_density(Reference kind, double s);
double reference_cdf(Reference kind, double s);

/// sup |F_n - F| for the empirical CDF of samples.
double ks_statistic(std::span<const double> samples, const std::function<double(double)> &cdf);

enum class Verdict { poisson, wigner, inconclusive };

std::string_view verdict_name(Verdict verdict);

struct SpacingClassification {
  double ks_poisson = 0.0;
  double ks_wigner = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double degenerate_fraction = 0.0;
  std::string diagnostic;
};

inline constexpr double kDefaultMargin = 0.02;
inline constexpr double kMaxDegenerateFraction = 0.5;

/// KS distances to both references; poisson iff ks_poisson < ks_wigner - margin,
/// wigner iff the reverse. Constant spacings or an overpopulated spectrum are
/// always inconclusive.
SpacingClassification classify_spacings(const UnfoldedSpacings &spacings, double margin = kDefaultMargin);

/// Degeneracy check, unfolding and classification in one step. Window errors
/// of heavily degenerate spectra become an inconclusive verdict.
SpacingClassification analyze_spacings(const SpectrumRecord &spectrum, std::optional<int> delta = std::nullopt,
                                       double margin = kDefaultMargin);

/// Histogram of spacings over [0, max(4, s_max)].
Histogram spacing_histogram(const UnfoldedSpacings &spacings, std::optional<int> delta = std::nullopt,
                            BinMode mode = BinMode::equal_width);

} // namespace resonant

#endif // RESONANT_STATISTICS_HPP
