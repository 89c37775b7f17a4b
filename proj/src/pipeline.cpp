#include "resonant/pipeline.hpp"

#include "resonant/errors.hpp"
#include "resonant/hamiltonian.hpp"
#include "resonant/io.hpp"
#include "resonant/oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace resonant {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json label_json(const BlockLabel &label) { return Json{{"N", label.n_particles}, {"M", label.m_level}}; }

std::string block_dir_name(const BlockLabel &label) {
  return "N" + std::to_string(label.n_particles) + "_M" + std::to_string(label.m_level);
}

} // namespace

BlockAnalysis analyze_block(const SpectrumRecord &spectrum, const StatsOptions &options) {
  BlockAnalysis out;
  const auto dim = static_cast<std::size_t>(spectrum.size());
  if (dim == 0)
    throw DegenerateError("empty spectrum for block " + to_string(spectrum.label));
  out.e_max = max_eigenvalue(spectrum);

  if (out.e_max > 0.0) {
    out.eigenvalue_histogram = normalized_eigenvalue_histogram(spectrum, options.delta, options.mode);
    const auto normalized = normalized_eigenvalues(spectrum);
    if (normalized.size() >= 10) {
      try {
        out.gumbel = fit_gumbel(normalized);
        out.gaussian = fit_gaussian(normalized);
        const GumbelParams g = *out.gumbel;
        const GaussianParams n = *out.gaussian;
        out.l2_gumbel = l2_distance(*out.eigenvalue_histogram, [g](double x) { return gumbel_density(x, g); });
        out.l2_gaussian = l2_distance(*out.eigenvalue_histogram, [n](double x) { return gaussian_density(x, n); });
      } catch (const DegenerateError &) {
        out.gumbel.reset();
        out.gaussian.reset();
      }
    }
  }

  const std::span<const double> values(spectrum.eigenvalues.data(), dim);
  out.unfold_delta = resolve_delta(options.delta, dim);
  out.classification.degenerate_fraction = degenerate_fraction(values);
  out.classification.ks_poisson = std::numeric_limits<double>::quiet_NaN();
  out.classification.ks_wigner = std::numeric_limits<double>::quiet_NaN();
  if (dim <= 2 * static_cast<std::size_t>(out.unfold_delta) + 2) {
    out.classification.diagnostic = "block too small to unfold";
    return out;
  }
  try {
    out.spacings = unfold(spectrum, options.delta);
    out.classification = classify_spacings(*out.spacings, options.margin);
    out.spacing_histogram = spacing_histogram(*out.spacings, options.delta, options.mode);
  } catch (const WindowError &e) {
    out.spacings.reset();
    out.classification.diagnostic = std::string("overpopulated spectrum: ") + e.what();
  } catch (const DegenerateError &e) {
    out.spacings.reset();
    out.classification.diagnostic = e.what();
  }
  return out;
}

std::string stats_json(const BlockAnalysis &analysis, const StatsOptions &options) {
  const auto &c = analysis.classification;
  Json doc;
  doc["delta"] = analysis.unfold_delta;
  doc["bin_mode"] = std::string(bin_mode_name(options.mode));
  doc["margin"] = options.margin;
  doc["spacings"] = analysis.spacings ? analysis.spacings->values.size() : 0;
  doc["degenerate_fraction"] = c.degenerate_fraction;
  doc["ks_poisson"] = nullable(c.ks_poisson);
  doc["ks_wigner"] = nullable(c.ks_wigner);
  doc["verdict"] = std::string(verdict_name(c.verdict));
  doc["diagnostic"] = c.diagnostic;
  doc["gumbel"] = analysis.gumbel ? Json{{"mu", analysis.gumbel->mu}, {"beta", analysis.gumbel->beta}} : Json(nullptr);
  doc["gaussian"] = analysis.gaussian ? Json{{"mean", analysis.gaussian->mean}, {"sigma", analysis.gaussian->sigma}}
                                      : Json(nullptr);
  doc["l2_gumbel"] = analysis.gumbel ? Json(analysis.l2_gumbel) : Json(nullptr);
  doc["l2_gaussian"] = analysis.gaussian ? Json(analysis.l2_gaussian) : Json(nullptr);
  doc["E_max"] = analysis.e_max;
  return doc.dump(2) + "\n";
}

std::string spectrum_json(const SpectrumRecord &spectrum) {
  Json doc;
  doc["label"] = label_json(spectrum.label);
  doc["family"] = spectrum.family ? Json(std::string(family_name(*spectrum.family))) : Json(nullptr);
  doc["seed"] = spectrum.seed;
  doc["dim"] = spectrum.size();
  if (spectrum.size() > 0) {
    const auto summary = degeneracy_summary(spectrum);
    doc["E_max"] = max_eigenvalue(spectrum);
    doc["integrality_deviation"] = integrality_deviation(spectrum);
    doc["zero_multiplicity"] = summary.zero_multiplicity;
    doc["cluster_tolerance"] = summary.cluster_tolerance;
  }
  doc["solver_tolerance"] = spectrum.solver_tolerance;
  return doc.dump(2) + "\n";
}

unsigned default_threads() {
  if (const char *env = std::getenv("RESONANT_THREADS")) {
    char *end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0)
      return static_cast<unsigned>(value);
  }
  return 1;
}

namespace {

void ensure_writable(const fs::path &dir) {
  if (dir.empty())
    throw std::invalid_argument("output directory not set");
  fs::create_directories(dir);
  const fs::path probe = dir / ".write_probe";
  io::write_text(probe, "");
  fs::remove(probe);
}

struct BlockResult {
  SpectrumRecord spectrum;
  BlockAnalysis analysis;
};

BlockResult process_block(const BlockLabel &label, const CouplingProvider &couplings, const StatsOptions &stats,
                          const AssemblyOptions &assembly, const fs::path &dir) {
  const auto matrix = assemble_block<double>(label, couplings, assembly);
  BlockResult result{diagonalize(matrix, couplings.family(), couplings.seed()), {}};
  result.analysis = analyze_block(result.spectrum, stats);

  fs::create_directories(dir);
  const auto &e = result.spectrum.eigenvalues;
  io::write_values(dir / "eigs.csv", std::span<const double>(e.data(), static_cast<std::size_t>(e.size())));
  io::write_text(dir / "eigs.json", spectrum_json(result.spectrum));
  io::write_text(dir / "stats.json", stats_json(result.analysis, stats));
  if (result.analysis.spacing_histogram)
    io::write_histogram(dir / "hist.csv", *result.analysis.spacing_histogram);
  else
    io::write_table(dir / "hist.csv", {"bin_left", "bin_right", "density"}, {});
  if (result.analysis.eigenvalue_histogram)
    io::write_histogram(dir / "eigen_hist.csv", *result.analysis.eigenvalue_histogram);
  return result;
}

Json block_summary(const BlockResult &r) {
  const auto &c = r.analysis.classification;
  Json entry = label_json(r.spectrum.label);
  entry["dim"] = r.spectrum.size();
  entry["E_max"] = r.analysis.e_max;
  entry["degenerate_fraction"] = c.degenerate_fraction;
  entry["ks_poisson"] = nullable(c.ks_poisson);
  entry["ks_wigner"] = nullable(c.ks_wigner);
  entry["verdict"] = std::string(verdict_name(c.verdict));
  return entry;
}

// Runs jobs[i] on a fixed pool; results land in slot i so their order never
// depends on scheduling.
template <typename Job>
void run_jobs(std::size_t count, unsigned threads, Job job) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++)
        job(i);
    });
}

Json failure_entry(const BlockLabel &label, const std::string &error) {
  Json entry = label_json(label);
  entry["error"] = error;
  return entry;
}

void write_manifest(const fs::path &dir, const std::string &command, const RunConfig &config, std::size_t blocks) {
  Json doc;
  doc["command"] = command;
  doc["threads"] = config.threads;
  doc["dim_cap"] = config.dim_cap;
  doc["blocks"] = blocks;
  io::write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

} // namespace

PipelineReport run_pipeline(const RunConfig &config) {
  if (config.n_values.empty() || config.m_values.empty())
    throw std::invalid_argument("sweep ranges must be nonempty");
  ensure_writable(config.out_dir);

  std::vector<BlockLabel> labels;
  for (int n : config.n_values)
    for (int m : config.m_values)
      labels.push_back({n, m});

  const CouplingProvider couplings(config.family, config.seed, config.normalize_c0000);
  AssemblyOptions assembly;
  assembly.dim_cap = config.dim_cap;
  assembly.threads = labels.size() == 1 ? config.threads : 1;

  std::vector<std::optional<Json>> summaries(labels.size());
  std::vector<std::string> errors(labels.size());
  run_jobs(labels.size(), config.threads, [&](std::size_t i) {
    try {
      const auto r = process_block(labels[i], couplings, config.stats, assembly,
                                   config.out_dir / block_dir_name(labels[i]));
      summaries[i] = block_summary(r);
    } catch (const std::exception &e) {
      errors[i] = std::string(e.what()).empty() ? "unknown error" : e.what();
    }
  });

  PipelineReport report;
  report.blocks = labels.size();
  Json summary = Json::array();
  Json failures = Json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (summaries[i]) {
      summary.push_back(*summaries[i]);
    } else {
      failures.push_back(failure_entry(labels[i], errors[i]));
      report.failures.push_back(to_string(labels[i]) + ": " + errors[i]);
    }
  }
  Json doc;
  doc["family"] = std::string(family_name(config.family));
  doc["seed"] = config.seed;
  doc["blocks"] = summary;
  io::write_text(config.out_dir / "summary.json", doc.dump(2) + "\n");
  io::write_text(config.out_dir / "failures.json", failures.dump(2) + "\n");
  write_manifest(config.out_dir, "sweep", config, labels.size());
  return report;
}

namespace {

struct Panel {
  std::string name;
  Family family;
  int size;
};

std::vector<Panel> figure_panels(int figure, const std::vector<int> &sizes) {
  std::vector<Panel> defaults;
  switch (figure) {
  case 1:
    defaults = {{"a", Family::szego, 18}, {"a", Family::szego, 23}, {"a", Family::szego, 27}};
    break;
  case 2:
    defaults = {{"a", Family::cf, 23}, {"a", Family::mrs, 27}, {"b", Family::lll, 20}, {"b", Family::lll, 23}};
    break;
  case 3:
    defaults = {{"a", Family::cf, 27}, {"b", Family::lll, 27}, {"c", Family::modcf, 27}, {"d", Family::random, 27}};
    break;
  default:
    throw std::invalid_argument("figure must be 1, 2 or 3");
  }
  if (sizes.empty())
    return defaults;

  std::vector<Panel> out;
  std::set<std::pair<std::string, Family>> seen;
  for (const auto &p : defaults) {
    if (!seen.insert({p.name, p.family}).second)
      continue;
    for (int size : std::set<int>(sizes.begin(), sizes.end()))
      out.push_back({p.name, p.family, size});
  }
  return out;
}

std::vector<std::vector<double>> sample_curve(double lo, double hi, std::size_t points,
                                              const std::vector<std::function<double(double)>> &curves) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    std::vector<double> row{x};
    for (const auto &f : curves)
      row.push_back(f(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace

PipelineReport reproduce_figures(const RunConfig &config, int figure, const std::vector<int> &sizes) {
  const auto panels = figure_panels(figure, sizes);
  const fs::path root = config.out_dir / ("figure" + std::to_string(figure));
  ensure_writable(root);

  AssemblyOptions assembly;
  assembly.dim_cap = config.dim_cap;
  assembly.threads = panels.size() == 1 ? config.threads : 1;

  std::vector<std::optional<Json>> entries(panels.size());
  std::vector<std::string> errors(panels.size());
  run_jobs(panels.size(), config.threads, [&](std::size_t i) {
    const Panel &p = panels[i];
    const BlockLabel label{p.size, p.size};
    try {
      const CouplingProvider couplings(p.family, config.seed, config.normalize_c0000);
      const fs::path dir = root / ("panel_" + p.name + "_" + std::string(family_name(p.family)) + "_" +
                                   block_dir_name(label));
      const auto r = process_block(label, couplings, config.stats, assembly, dir);
      Json entry;
      entry["panel"] = p.name;
      entry["family"] = std::string(family_name(p.family));
      entry["label"] = label_json(label);
      entry["dim"] = r.spectrum.size();
      entry["directory"] = dir.filename().string();

      if (figure == 3) {
        io::write_table(dir / "reference_curves.csv", {"s", "poisson", "wigner"},
                        sample_curve(0.0, 4.0, 201,
                                     {[](double s) { return reference_density(Reference::poisson, s); },
                                      [](double s) { return reference_density(Reference::wigner, s); }}));
        const auto &c = r.analysis.classification;
        entry["verdict"] = std::string(verdict_name(c.verdict));
        entry["ks_poisson"] = nullable(c.ks_poisson);
        entry["ks_wigner"] = nullable(c.ks_wigner);
        if (p.family == Family::random)
          entry["note"] = "random couplings come from the given seed; the panel is reproduced in distribution only";
      } else if (r.analysis.gumbel && r.analysis.eigenvalue_histogram) {
        const GumbelParams g = *r.analysis.gumbel;
        const GaussianParams n = *r.analysis.gaussian;
        const auto &h = *r.analysis.eigenvalue_histogram;
        io::write_table(dir / "fit_curves.csv", {"x", "gumbel", "gaussian"},
                        sample_curve(h.edges.front(), h.edges.back(), 201,
                                     {[g](double x) { return gumbel_density(x, g); },
                                      [n](double x) { return gaussian_density(x, n); }}));
        entry["gumbel"] = Json{{"mu", g.mu}, {"beta", g.beta}};
        entry["l2_gumbel"] = r.analysis.l2_gumbel;
        entry["l2_gaussian"] = r.analysis.l2_gaussian;
      }
      entries[i] = std::move(entry);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });

  PipelineReport report;
  report.blocks = panels.size();
  Json panels_json = Json::array();
  Json failures = Json::array();
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (entries[i]) {
      panels_json.push_back(*entries[i]);
    } else {
      const BlockLabel label{panels[i].size, panels[i].size};
      failures.push_back(failure_entry(label, errors[i]));
      report.failures.push_back(to_string(label) + ": " + errors[i]);
    }
  }
  Json doc;
  doc["figure"] = figure;
  doc["seed"] = config.seed;
  doc["panels"] = panels_json;
  io::write_text(root / "summary.json", doc.dump(2) + "\n");
  io::write_text(root / "failures.json", failures.dump(2) + "\n");
  write_manifest(root, "figures", config, panels.size());
  return report;
}

std::optional<VerifySuite> parse_verify_suite(std::string_view name) {
  if (name == "two-particle")
    return VerifySuite::two_particle;
  if (name == "emax")
    return VerifySuite::emax;
  if (name == "integer")
    return VerifySuite::integer;
  if (name == "inheritance")
    return VerifySuite::inheritance;
  return std::nullopt;
}

namespace {

std::string fmt(double x) { return io::format_double(x); }

std::vector<Family> closed_form_families(const VerifyOptions &options) {
  if (options.family) {
    if (!has_closed_form(*options.family))
      throw UnsupportedFamily("no oracle for " + std::string(family_name(*options.family)));
    return {*options.family};
  }
  return {Family::szego, Family::mrs, Family::cf, Family::lll};
}

std::vector<int> range_or(std::optional<int> single, int lo, int hi) {
  if (single)
    return {*single};
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v)
    out.push_back(v);
  return out;
}

SpectrumRecord block_spectrum(Family family, BlockLabel label) {
  const CouplingProvider couplings(family);
  return diagonalize(assemble_block<double>(label, couplings), family);
}

void verify_two_particle(const VerifyOptions &options, std::vector<VerifyCase> &cases) {
  const int max_m = options.max_m.value_or(25);
  for (Family family : closed_form_families(options)) {
    const CouplingProvider couplings(family);
    for (int m_level : range_or(options.m, 1, max_m)) {
      if (m_level % 2 == 0)
        continue;
      const BlockLabel label{2, m_level};
      const auto matrix = assemble_block<double>(label, couplings);
      const Eigen::MatrixXd formula = two_particle_matrix<double>(couplings, m_level);

      double matrix_error = 0.0;
      for (Eigen::Index i = 0; i < formula.size(); ++i) {
        const double a = matrix.entries.data()[i];
        const double b = formula.data()[i];
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0)
          matrix_error = std::max(matrix_error, std::abs(a - b) / scale);
      }
      const auto numeric = diagonalize(matrix, family).eigenvalues;
      Eigen::VectorXd exact = two_particle_spectrum(family, m_level).values();
      std::sort(exact.begin(), exact.end());
      const double spectrum_error = (numeric - exact).cwiseAbs().maxCoeff();

      const bool ok = matrix_error <= 1e-13 && spectrum_error <= 1e-10;
      cases.push_back({std::string(family_name(family)) + " " + to_string(label), ok,
                       "matrix rel err " + fmt(matrix_error) + ", spectrum abs err " + fmt(spectrum_error)});
    }
  }
}

void verify_emax(const VerifyOptions &options, std::vector<VerifyCase> &cases, bool integer_only) {
  const int max_n = options.n.value_or(12);
  const int max_m = options.max_m.value_or(12);
  const auto families = integer_only ? std::vector<Family>{Family::szego} : closed_form_families(options);
  for (Family family : families) {
    for (int n : range_or(options.n, 1, max_n)) {
      for (int m : range_or(options.m, 0, max_m)) {
        const BlockLabel label{n, m};
        const auto spectrum = block_spectrum(family, label);
        const std::string name = std::string(family_name(family)) + " " + to_string(label);
        if (integer_only) {
          const double dev = integrality_deviation(spectrum);
          cases.push_back({name, dev <= 1e-8, "integrality deviation " + fmt(dev)});
        } else {
          const double expected = expected_max_eigenvalue(family, label);
          const double actual = max_eigenvalue(spectrum);
          cases.push_back({name, std::abs(actual - expected) <= 1e-8,
                           "E_max " + fmt(actual) + " expected " + fmt(expected)});
        }
      }
    }
  }
}

void verify_inheritance(const VerifyOptions &options, std::vector<VerifyCase> &cases) {
  const Family family = options.family.value_or(Family::cf);
  const int n = options.n.value_or(4);
  const int lo = options.m.value_or(4);
  const int hi = options.max_m.value_or(10);
  std::vector<SpectrumRecord> spectra;
  for (int m = lo; m <= hi; m += 2)
    spectra.push_back(block_spectrum(family, {n, m}));
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    for (std::size_t j = i + 1; j < spectra.size(); ++j) {
      const auto result = inheritance_check(spectra[i], spectra[j]);
      cases.push_back({std::string(family_name(family)) + " " + to_string(spectra[i].label) + " in " +
                           to_string(spectra[j].label),
                       result.inherited, std::to_string(result.unmatched.size()) + " unmatched"});
    }
  }
  if (spectra.size() < 2)
    cases.push_back({"inheritance range", false, "need at least two blocks (M from --m to --max-m, step 2)"});
}

} // namespace

std::vector<VerifyCase> run_verify(const VerifyOptions &options) {
  std::vector<VerifyCase> cases;
  switch (options.suite) {
  case VerifySuite::two_particle: verify_two_particle(options, cases); break;
  case VerifySuite::emax: verify_emax(options, cases, false); break;
  case VerifySuite::integer: verify_emax(options, cases, true); break;
  case VerifySuite::inheritance: verify_inheritance(options, cases); break;
  }
  return cases;
}

} // namespace resonant
