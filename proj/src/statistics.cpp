#include "resonant/statistics.hpp"

#include "resonant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace resonant {

std::string_view bin_mode_name(BinMode mode) {
  return mode == BinMode::equal_width ? "equal-width" : "equal-count";
}

std::optional<BinMode> parse_bin_mode(std::string_view name) {
  if (name == "equal-width")
    return BinMode::equal_width;
  if (name == "equal-count")
    return BinMode::equal_count;
  return std::nullopt;
}

double Histogram::total_mass() const {
  double mass = 0.0;
  for (std::size_t i = 0; i < bins(); ++i)
    mass += densities[i] * width(i);
  return mass;
}

int resolve_delta(std::optional<int> delta, std::size_t samples) {
  if (delta) {
    if (*delta < 1)
      throw std::invalid_argument("delta must be a positive integer");
    return *delta;
  }
  return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(samples)))));
}

Histogram make_histogram(std::span<const double> samples, double lo, double hi, int delta, BinMode mode) {
  if (samples.empty())
    throw std::invalid_argument("histogram of an empty sample");
  if (!(hi > lo))
    throw std::invalid_argument("histogram range must have positive width");
  if (delta < 1)
    throw std::invalid_argument("delta must be a positive integer");

  const double slack = 1e-12 * (hi - lo);
  for (double x : samples)
    if (!(x >= lo - slack && x <= hi + slack))
      throw std::invalid_argument("sample outside the histogram range");

  const std::size_t n = samples.size();
  Histogram h;
  h.count = n;
  h.mode = mode;
  std::vector<std::size_t> counts;

  if (mode == BinMode::equal_width) {
    const std::size_t bins = (n + static_cast<std::size_t>(delta) - 1) / static_cast<std::size_t>(delta);
    const double width = (hi - lo) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
      h.edges[i] = lo + width * static_cast<double>(i);
    h.edges.back() = hi;
    counts.assign(bins, 0);
    for (double x : samples) {
      const double position = std::floor((x - lo) / width);
      const auto bin = static_cast<std::size_t>(std::clamp(position, 0.0, static_cast<double>(bins - 1)));
      ++counts[bin];
    }
  } else {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    h.edges.push_back(lo);
    std::size_t pending = 0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(delta)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(delta));
      pending += stop - start;
      if (stop == n)
        break;
      const double boundary = 0.5 * (sorted[stop - 1] + sorted[stop]);
      if (boundary > h.edges.back() && boundary < hi) {
        h.edges.push_back(boundary);
        counts.push_back(pending);
        pending = 0;
      }
    }
    h.edges.push_back(hi);
    counts.push_back(pending);
  }

  h.densities.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    h.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(n) * h.width(i));
  return h;
}

std::vector<double> normalized_eigenvalues(const SpectrumRecord &spectrum) {
  if (spectrum.size() == 0)
    throw DegenerateError("normalized eigenvalues of an empty spectrum");
  const double top = max_eigenvalue(spectrum);
  if (!(top > 0.0))
    throw DegenerateError("E_max <= 0 for block " + to_string(spectrum.label));
  std::vector<double> out(static_cast<std::size_t>(spectrum.size()));
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    out[static_cast<std::size_t>(i)] = spectrum.eigenvalues(i) / top;
  out.back() = 1.0;
  return out;
}

Histogram normalized_eigenvalue_histogram(const SpectrumRecord &spectrum, std::optional<int> delta, BinMode mode) {
  const auto samples = normalized_eigenvalues(spectrum);
  const double lo = std::min(0.0, samples.front());
  return make_histogram(samples, lo, 1.0, resolve_delta(delta, samples.size()), mode);
}

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments sample_moments(std::span<const double> samples) {
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples)
    ss += (x - mean) * (x - mean);
  return {mean, ss / n};
}

GumbelParams gumbel_from_moments(const Moments &m) {
  const double beta = std::sqrt(6.0 * m.variance) / std::numbers::pi;
  return {m.mean - kEulerGamma * beta, beta};
}

} // namespace

GumbelParams fit_gumbel(std::span<const double> samples) {
  if (samples.size() < 10)
    throw std::invalid_argument("fit_gumbel needs at least 10 samples");
  const Moments m = sample_moments(samples);
  if (!(m.variance > 0.0))
    throw DegenerateError("fit_gumbel: samples have zero variance");
  return gumbel_from_moments(m);
}

GumbelParams fit_gumbel(const Histogram &histogram) {
  if (histogram.count < 10)
    throw std::invalid_argument("fit_gumbel needs at least 10 samples");
  double mean = 0.0;
  for (std::size_t i = 0; i < histogram.bins(); ++i)
    mean += histogram.densities[i] * histogram.width(i) * histogram.center(i);
  double variance = 0.0;
  for (std::size_t i = 0; i < histogram.bins(); ++i) {
    const double d = histogram.center(i) - mean;
    variance += histogram.densities[i] * histogram.width(i) * d * d;
  }
  if (!(variance > 0.0))
    throw DegenerateError("fit_gumbel: histogram has zero variance");
  return gumbel_from_moments({mean, variance});
}

GaussianParams fit_gaussian(std::span<const double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("fit_gaussian needs at least 2 samples");
  const Moments m = sample_moments(samples);
  if (!(m.variance > 0.0))
    throw DegenerateError("fit_gaussian: samples have zero variance");
  return {m.mean, std::sqrt(m.variance)};
}

double gumbel_density(double x, const GumbelParams &params) {
  const double z = (x - params.mu) / params.beta;
  return std::exp(-z - std::exp(-z)) / params.beta;
}

double gumbel_cdf(double x, const GumbelParams &params) {
  return std::exp(-std::exp(-(x - params.mu) / params.beta));
}

double gaussian_density(double x, const GaussianParams &params) {
  const double z = (x - params.mean) / params.sigma;
  return std::exp(-0.5 * z * z) / (params.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double l2_distance(const Histogram &histogram, const std::function<double(double)> &density) {
  constexpr int kPanels = 16; // Simpson panels per bin, even
  double total = 0.0;
  for (std::size_t b = 0; b < histogram.bins(); ++b) {
    const double a = histogram.edges[b];
    const double step = histogram.width(b) / kPanels;
    const double level = histogram.densities[b];
    double sum = 0.0;
    for (int p = 0; p <= kPanels; ++p) {
      const double diff = density(a + step * p) - level;
      const double weight = (p == 0 || p == kPanels) ? 1.0 : (p % 2 == 1 ? 4.0 : 2.0);
      sum += weight * diff * diff;
    }
    total += sum * step / 3.0;
  }
  return std::sqrt(total);
}

namespace {

double tie_tolerance(std::span<const double> sorted) {
  return kTieFraction * (sorted.back() - sorted.front());
}

} // namespace

double degenerate_fraction(std::span<const double> sorted) {
  if (sorted.size() < 2)
    return 0.0;
  const double tol = tie_tolerance(sorted);
  std::size_t ties = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] <= tol)
      ++ties;
  return static_cast<double>(ties) / static_cast<double>(sorted.size() - 1);
}

UnfoldedSpacings unfold(std::span<const double> sorted, std::optional<int> delta, BlockLabel label) {
  const std::size_t dim = sorted.size();
  const int window = resolve_delta(delta, dim);
  const auto d = static_cast<std::size_t>(window);
  if (dim <= 2 * d + 2)
    throw std::invalid_argument("unfold: need more than 2*delta+2 levels, got " + std::to_string(dim));
  if (!std::is_sorted(sorted.begin(), sorted.end()))
    throw std::invalid_argument("unfold: spectrum must be sorted ascending");

  UnfoldedSpacings out;
  out.delta = window;
  out.label = label;
  out.degenerate_fraction = degenerate_fraction(sorted);

  const double tol = tie_tolerance(sorted);
  // 0-based i = I - 1 for I = delta+1 ... dim-delta-1.
  for (std::size_t i = d; i + d + 1 < dim; ++i) {
    const double span = sorted[i + d] - sorted[i - d];
    if (!(span > tol))
      throw WindowError("unfold: zero-width window at level " + std::to_string(i + 1) + " of block " +
                            to_string(label),
                        static_cast<long>(i + 1));
    double gap = sorted[i + 1] - sorted[i];
    if (gap <= tol)
      gap = 0.0;
    out.values.push_back(gap / span);
  }

  const double mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) /
                      static_cast<double>(out.values.size());
  if (!(mean > 0.0))
    throw DegenerateError("unfold: every spacing is a tie in block " + to_string(label));
  for (double &s : out.values)
    s /= mean;
  return out;
}

UnfoldedSpacings unfold(const SpectrumRecord &spectrum, std::optional<int> delta) {
  const std::span<const double> values(spectrum.eigenvalues.data(), static_cast<std::size_t>(spectrum.size()));
  return unfold(values, delta, spectrum.label);
}

double reference_density(Reference kind, double s) {
  if (s < 0.0)
    return 0.0;
  if (kind == Reference::poisson)
    return std::exp(-s);
  return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

double reference_cdf(Reference kind, double s) {
  if (s <= 0.0)
    return 0.0;
  if (kind == Reference::poisson)
    return -std::expm1(-s);
  return -std::expm1(-0.25 * std::numbers::pi * s * s);
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)> &cdf) {
  if (samples.empty())
    throw std::invalid_argument("ks_statistic of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
  case Verdict::poisson: return "poisson";
  case Verdict::wigner: return "wigner";
  case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SpacingClassification classify_spacings(const UnfoldedSpacings &spacings, double margin) {
  if (spacings.values.empty())
    throw std::invalid_argument("classify_spacings: no spacings");
  SpacingClassification c;
  c.degenerate_fraction = spacings.degenerate_fraction;
  c.ks_poisson = ks_statistic(spacings.values, [](double s) { return reference_cdf(Reference::poisson, s); });
  c.ks_wigner = ks_statistic(spacings.values, [](double s) { return reference_cdf(Reference::wigner, s); });

  const auto [lo, hi] = std::minmax_element(spacings.values.begin(), spacings.values.end());
  if (*hi - *lo <= 1e-12) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "constant spacings: empirical CDF is a single step";
    return c;
  }
  if (c.degenerate_fraction > kMaxDegenerateFraction) {
    c.verdict = Verdict::inconclusive;
    c.diagnostic = "overpopulated spectrum: degenerate fraction " + std::to_string(c.degenerate_fraction);
    return c;
  }

  if (c.ks_poisson < c.ks_wigner - margin)
    c.verdict = Verdict::poisson;
  else if (c.ks_wigner < c.ks_poisson - margin)
    c.verdict = Verdict::wigner;
  else
    c.verdict = Verdict::inconclusive;
  if (spacings.values.size() < 100)
    c.diagnostic = "fewer than 100 spacings";
  return c;
}

SpacingClassification analyze_spacings(const SpectrumRecord &spectrum, std::optional<int> delta, double margin) {
  const std::span<const double> values(spectrum.eigenvalues.data(), static_cast<std::size_t>(spectrum.size()));
  try {
    return classify_spacings(unfold(spectrum, delta), margin);
  } catch (const WindowError &e) {
    SpacingClassification c;
    c.ks_poisson = std::numeric_limits<double>::quiet_NaN();
    c.ks_wigner = std::numeric_limits<double>::quiet_NaN();
    c.degenerate_fraction = degenerate_fraction(values);
    c.verdict = Verdict::inconclusive;
    c.diagnostic = std::string("overpopulated spectrum: ") + e.what();
    return c;
  } catch (const DegenerateError &e) {
    SpacingClassification c;
    c.ks_poisson = std::numeric_limits<double>::quiet_NaN();
    c.ks_wigner = std::numeric_limits<double>::quiet_NaN();
    c.degenerate_fraction = degenerate_fraction(values);
    c.verdict = Verdict::inconclusive;
    c.diagnostic = e.what();
    return c;
  }
}

Histogram spacing_histogram(const UnfoldedSpacings &spacings, std::optional<int> delta, BinMode mode) {
  if (spacings.values.empty())
    throw std::invalid_argument("spacing_histogram: no spacings");
  const double top = *std::max_element(spacings.values.begin(), spacings.values.end());
  return make_histogram(spacings.values, 0.0, std::max(4.0, top), resolve_delta(delta, spacings.values.size()),
                        mode);
}

} // namespace resonant
