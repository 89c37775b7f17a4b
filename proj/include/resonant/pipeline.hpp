#ifndef RESONANT_PIPELINE_HPP
#define RESONANT_PIPELINE_HPP

#include "resonant/couplings.hpp"
#include "resonant/partitions.hpp"
#include "resonant/spectra.hpp"
#include "resonant/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace resonant {

struct StatsOptions {
  std::optional<int> delta; // empty: round(sqrt(count))
  BinMode mode = BinMode::equal_width;
  double margin = kDefaultMargin;
};

/// Everything the statistics stage derives from one spectrum.
struct BlockAnalysis {
  double e_max = 0.0;
  int unfold_delta = 0;
  SpacingClassification classification;
  std::optional<UnfoldedSpacings> spacings;
  std::optional<Histogram> spacing_histogram;
  std::optional<Histogram> eigenvalue_histogram;
  std::optional<GumbelParams> gumbel;
  std::optional<GaussianParams> gaussian;
  double l2_gumbel = 0.0;
  double l2_gaussian = 0.0;
};

BlockAnalysis analyze_block(const SpectrumRecord &spectrum, const StatsOptions &options = {});

/// JSON document with delta, degenerate_fraction, ks_poisson, ks_wigner,
/// verdict, gumbel {mu, beta} and E_max.
std::string stats_json(const BlockAnalysis &analysis, const StatsOptions &options);

/// JSON sidecar of a spectrum: label, family, seed, dim, E_max, integrality
/// deviation, zero multiplicity and tolerances.
std::string spectrum_json(const SpectrumRecord &spectrum);

struct RunConfig {
  Family family = Family::szego;
  std::uint64_t seed = 0;
  std::optional<bool> normalize_c0000;
  std::vector<int> n_values; // the sweep is the cartesian product
  std::vector<int> m_values;
  StatsOptions stats;
  std::filesystem::path out_dir;
  unsigned threads = 1;
  std::size_t dim_cap = 20000;
};

struct PipelineReport {
  std::size_t blocks = 0;
  std::vector<std::string> failures;

  int exit_status() const noexcept { return failures.empty() ? 0 : 1; }
};

/// Worker count from RESONANT_THREADS, else 1.
unsigned default_threads();

/// Assemble, diagonalize and analyze every block of the sweep. Each block gets
/// a directory N<n>_M<m> holding eigs.csv, eigs.json, hist.csv,
/// eigen_hist.csv and stats.json; the sweep gets summary.json, failures.json
/// and manifest.json. Data files are byte-identical for equal inputs
/// regardless of the thread count.
PipelineReport run_pipeline(const RunConfig &config);

/// Plot-ready data for one of the three figures. Default block sizes are
/// figure 1: Szego N=M in {18, 23, 27}; figure 2: cf 23, mrs 27, lll 20 and 23;
/// figure 3: cf, lll, modcf, random at N=M=27. A nonempty sizes list replaces
/// every panel's N=M. config.family, n_values and m_values are ignored.
PipelineReport reproduce_figures(const RunConfig &config, int figure, const std::vector<int> &sizes = {});

enum class VerifySuite { two_particle, emax, integer, inheritance };

std::optional<VerifySuite> parse_verify_suite(std::string_view name);

struct VerifyOptions {
  VerifySuite suite = VerifySuite::two_particle;
  std::optional<Family> family;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> max_m;
};

struct VerifyCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs one oracle suite; an empty family runs every closed-form family.
std::vector<VerifyCase> run_verify(const VerifyOptions &options);

} // namespace resonant

#endif // RESONANT_PIPELINE_HPP
