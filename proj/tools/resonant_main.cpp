// Command-line front end: basis, matrix, spectrum, stats, verify, figures, sweep.

#include "resonant/errors.hpp"
#include "resonant/hamiltonian.hpp"
#include "resonant/io.hpp"
#include "resonant/pipeline.hpp"
#include "resonant/spectra.hpp"
#include "resonant/statistics.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace resonant;

Family family_option(const std::string &name) {
  const auto family = parse_family(name);
  if (!family)
    throw CLI::ValidationError("--system", "unknown system '" + name + "'");
  return *family;
}

std::optional<bool> bool_option(const std::string &text) {
  if (text.empty())
    return std::nullopt;
  if (text == "true" || text == "1" || text == "on" || text == "yes")
    return true;
  if (text == "false" || text == "0" || text == "off" || text == "no")
    return false;
  throw CLI::ValidationError("--normalize-c0000", "expected a boolean, got '" + text + "'");
}

std::optional<int> delta_option(const std::string &text) {
  if (text.empty() || text == "auto")
    return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
    throw CLI::ValidationError("--delta", "expected 'auto' or a positive integer");
  return value;
}

BinMode mode_option(const std::string &text) {
  const auto mode = parse_bin_mode(text);
  if (!mode)
    throw CLI::ValidationError("--mode", "expected equal-width or equal-count");
  return *mode;
}

// "a", "a:b" (inclusive) or "a,b,c".
std::vector<int> range_option(const std::string &text, const std::string &flag) {
  std::vector<int> out;
  try {
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      const int lo = std::stoi(text.substr(0, colon));
      const int hi = std::stoi(text.substr(colon + 1));
      for (int v = lo; v <= hi; ++v)
        out.push_back(v);
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ','))
        out.push_back(std::stoi(item));
    }
  } catch (const std::exception &) {
    throw CLI::ValidationError(flag, "expected N, A:B or a comma list");
  }
  if (out.empty())
    throw CLI::ValidationError(flag, "range is empty");
  return out;
}

struct BlockFlags {
  std::string system = "szego";
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::string normalize;
  unsigned threads = default_threads();
  std::size_t dim_cap = 20000;
};

void add_block_flags(CLI::App *cmd, BlockFlags &f) {
  cmd->add_option("--system", f.system, "szego|mrs|cf|lll|modcf|random")->capture_default_str();
  cmd->add_option("--n", f.n, "particle number N")->required();
  cmd->add_option("--m", f.m, "level M")->required();
  cmd->add_option("--seed", f.seed, "seed of the random family")->capture_default_str();
  cmd->add_option("--normalize-c0000", f.normalize, "rescale so that C(0,0,0,0)=1 (default: random only)");
  cmd->add_option("--threads", f.threads, "worker threads (default from RESONANT_THREADS)");
  cmd->add_option("--dim-cap", f.dim_cap, "largest accepted block dimension")->capture_default_str();
}

BlockMatrixd assemble_from(const BlockFlags &f, CouplingProvider &couplings_out) {
  couplings_out = CouplingProvider(family_option(f.system), f.seed, bool_option(f.normalize));
  AssemblyOptions options;
  options.threads = f.threads;
  options.dim_cap = f.dim_cap;
  return assemble_block<double>(BlockLabel{f.n, f.m}, couplings_out, options);
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv) {
  auto path = csv;
  path.replace_extension(".json");
  return path;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fock-space blocks of quantum resonant systems: spectra and level statistics"};
  app.require_subcommand(1);

  // basis
  auto *basis_cmd = app.add_subcommand("basis", "count (and list) the Fock basis of a block");
  int basis_n = 0, basis_m = 0;
  bool basis_list = false;
  basis_cmd->add_option("--n", basis_n, "particle number N")->required();
  basis_cmd->add_option("--m", basis_m, "level M")->required();
  basis_cmd->add_flag("--list", basis_list, "print one occupation vector per line");

  // matrix
  auto *matrix_cmd = app.add_subcommand("matrix", "assemble the Hamiltonian block");
  BlockFlags matrix_flags;
  std::string matrix_out;
  add_block_flags(matrix_cmd, matrix_flags);
  matrix_cmd->add_option("--out", matrix_out, "CSV file (default: stdout)");

  // spectrum
  auto *spectrum_cmd = app.add_subcommand("spectrum", "diagonalize a block");
  BlockFlags spectrum_flags;
  std::string spectrum_out;
  add_block_flags(spectrum_cmd, spectrum_flags);
  spectrum_cmd->add_option("--out", spectrum_out, "eigenvalue CSV; a .json sidecar is written next to it")
      ->required();

  // stats
  auto *stats_cmd = app.add_subcommand("stats", "unfolding, level statistics and Gumbel fit of a spectrum");
  std::string stats_in, stats_out, stats_hist, stats_eigen_hist, stats_delta = "auto", stats_mode = "equal-width";
  double stats_margin = kDefaultMargin;
  stats_cmd->add_option("--in", stats_in, "eigenvalue CSV, one value per line")->required();
  stats_cmd->add_option("--delta", stats_delta, "auto or a positive integer")->capture_default_str();
  stats_cmd->add_option("--margin", stats_margin, "KS margin for a verdict")->capture_default_str();
  stats_cmd->add_option("--mode", stats_mode, "equal-width|equal-count")->capture_default_str();
  stats_cmd->add_option("--out", stats_out, "stats JSON (default: stdout)");
  stats_cmd->add_option("--histogram", stats_hist, "spacing histogram CSV");
  stats_cmd->add_option("--eigen-histogram", stats_eigen_hist, "E/E_max histogram CSV");

  // verify
  auto *verify_cmd = app.add_subcommand("verify", "check closed-form oracles against the numerical pipeline");
  std::string verify_suite, verify_system;
  VerifyOptions verify_options;
  verify_cmd->add_option("--suite", verify_suite, "two-particle|emax|integer|inheritance")->required();
  verify_cmd->add_option("--system", verify_system, "restrict to one closed-form family");
  verify_cmd->add_option("--n", verify_options.n, "particle number");
  verify_cmd->add_option("--m", verify_options.m, "level");
  verify_cmd->add_option("--max-m", verify_options.max_m, "largest level in the sweep");

  // figures
  auto *figures_cmd = app.add_subcommand("figures", "emit plot-ready data for figure 1, 2 or 3");
  int figure = 0;
  std::vector<int> figure_sizes;
  RunConfig figure_config;
  figure_config.threads = default_threads();
  std::string figure_delta = "auto", figure_mode = "equal-width", figure_out;
  figures_cmd->add_option("--figure", figure, "1, 2 or 3")->required();
  figures_cmd->add_option("--size", figure_sizes, "replace every panel's N=M (repeatable)");
  figures_cmd->add_option("--out-dir", figure_out, "output directory")->required();
  figures_cmd->add_option("--seed", figure_config.seed, "seed of the random panel")->capture_default_str();
  figures_cmd->add_option("--threads", figure_config.threads, "worker threads");
  figures_cmd->add_option("--dim-cap", figure_config.dim_cap, "largest accepted block dimension");
  figures_cmd->add_option("--delta", figure_delta, "auto or a positive integer");
  figures_cmd->add_option("--margin", figure_config.stats.margin, "KS margin for a verdict");
  figures_cmd->add_option("--mode", figure_mode, "equal-width|equal-count");

  // sweep
  auto *sweep_cmd = app.add_subcommand("sweep", "assemble, diagonalize and analyze a range of blocks");
  RunConfig sweep_config;
  sweep_config.threads = default_threads();
  std::string sweep_system = "szego", sweep_n, sweep_m, sweep_normalize, sweep_delta = "auto",
              sweep_mode = "equal-width", sweep_out;
  sweep_cmd->add_option("--system", sweep_system, "szego|mrs|cf|lll|modcf|random")->capture_default_str();
  sweep_cmd->add_option("--n", sweep_n, "N, A:B or a comma list")->required();
  sweep_cmd->add_option("--m", sweep_m, "M, A:B or a comma list")->required();
  sweep_cmd->add_option("--seed", sweep_config.seed, "seed of the random family");
  sweep_cmd->add_option("--normalize-c0000", sweep_normalize, "rescale so that C(0,0,0,0)=1");
  sweep_cmd->add_option("--out-dir", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--threads", sweep_config.threads, "worker threads");
  sweep_cmd->add_option("--dim-cap", sweep_config.dim_cap, "largest accepted block dimension");
  sweep_cmd->add_option("--delta", sweep_delta, "auto or a positive integer");
  sweep_cmd->add_option("--margin", sweep_config.stats.margin, "KS margin for a verdict");
  sweep_cmd->add_option("--mode", sweep_mode, "equal-width|equal-count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*basis_cmd) {
      const BlockLabel label{basis_n, basis_m};
      std::cout << count_partitions(label) << '\n';
      if (basis_list) {
        for (const auto &state : enumerate_basis(label)) {
          const auto &occ = state.occupations();
          for (std::size_t k = 0; k < occ.size(); ++k)
            std::cout << (k ? "," : "") << occ[k];
          std::cout << '\n';
        }
      }
      return 0;
    }

    if (*matrix_cmd) {
      CouplingProvider couplings(Family::szego);
      const auto matrix = assemble_from(matrix_flags, couplings);
      if (matrix_out.empty()) {
        for (Eigen::Index i = 0; i < matrix.dim(); ++i) {
          for (Eigen::Index j = 0; j < matrix.dim(); ++j)
            std::cout << (j ? "," : "") << io::format_double(matrix.entries(i, j));
          std::cout << '\n';
        }
      } else {
        io::write_matrix(matrix_out, matrix.entries);
        std::cout << "dim " << matrix.dim() << ", nonzero fraction "
                  << io::format_double(nonzero_fraction(matrix.entries)) << '\n';
      }
      return 0;
    }

    if (*spectrum_cmd) {
      CouplingProvider couplings(Family::szego);
      const auto matrix = assemble_from(spectrum_flags, couplings);
      const auto spectrum = diagonalize(matrix, couplings.family(), couplings.seed());
      const auto &e = spectrum.eigenvalues;
      io::write_values(spectrum_out, std::span<const double>(e.data(), static_cast<std::size_t>(e.size())));
      io::write_text(sidecar_path(spectrum_out), spectrum_json(spectrum));
      return 0;
    }

    if (*stats_cmd) {
      auto values = io::read_values(stats_in);
      std::sort(values.begin(), values.end());
      SpectrumRecord spectrum;
      spectrum.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
      StatsOptions options{delta_option(stats_delta), mode_option(stats_mode), stats_margin};
      const auto analysis = analyze_block(spectrum, options);
      const std::string json = stats_json(analysis, options);
      if (stats_out.empty())
        std::cout << json;
      else
        io::write_text(stats_out, json);
      if (!stats_hist.empty()) {
        if (analysis.spacing_histogram)
          io::write_histogram(stats_hist, *analysis.spacing_histogram);
        else
          io::write_table(stats_hist, {"bin_left", "bin_right", "density"}, {});
      }
      if (!stats_eigen_hist.empty() && analysis.eigenvalue_histogram)
        io::write_histogram(stats_eigen_hist, *analysis.eigenvalue_histogram);
      return 0;
    }

    if (*verify_cmd) {
      const auto suite = parse_verify_suite(verify_suite);
      if (!suite)
        throw CLI::ValidationError("--suite", "unknown suite '" + verify_suite + "'");
      verify_options.suite = *suite;
      if (!verify_system.empty())
        verify_options.family = family_option(verify_system);
      const auto cases = run_verify(verify_options);
      std::size_t failed = 0;
      for (const auto &c : cases) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += c.passed ? 0 : 1;
      }
      std::cout << cases.size() - failed << "/" << cases.size() << " cases passed\n";
      return failed == 0 && !cases.empty() ? 0 : 1;
    }

    if (*figures_cmd) {
      figure_config.out_dir = figure_out;
      figure_config.stats.delta = delta_option(figure_delta);
      figure_config.stats.mode = mode_option(figure_mode);
      const auto report = reproduce_figures(figure_config, figure, figure_sizes);
      for (const auto &f : report.failures)
        std::cerr << "error: " << f << '\n';
      return report.exit_status();
    }

    if (*sweep_cmd) {
      sweep_config.family = family_option(sweep_system);
      sweep_config.normalize_c0000 = bool_option(sweep_normalize);
      sweep_config.n_values = range_option(sweep_n, "--n");
      sweep_config.m_values = range_option(sweep_m, "--m");
      sweep_config.out_dir = sweep_out;
      sweep_config.stats.delta = delta_option(sweep_delta);
      sweep_config.stats.mode = mode_option(sweep_mode);
      const auto report = run_pipeline(sweep_config);
      for (const auto &f : report.failures)
        std::cerr << "error: " << f << '\n';
      return report.exit_status();
    }
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
