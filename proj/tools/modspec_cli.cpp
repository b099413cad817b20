// Command-line front end: presets, config files, spectra, method comparison,
// parameter sweeps, homodyne maps, heterodyne cross-correlations, stochastic
// verification, truncation convergence.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modspec/io.hpp"
#include "modspec/iterative.hpp"
#include "modspec/presets.hpp"

namespace {

using namespace modspec;

struct CommonOpts {
  std::string preset_name;
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
  std::string output_dir;
  int half_width = 0;  // 0: take from config
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--preset", opts.preset_name,
                  "named preset: standard | fig2a | fig2c | fig3");
  cmd->add_option("--config", opts.config_path, "configuration file");
  cmd->add_option("--set", opts.overrides,
                  "override a config entry, section.key=value (repeatable)");
  cmd->add_option("--output", opts.output_dir, "output directory");
  cmd->add_option("--K", opts.half_width, "truncation half-width");
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty())
    cfg = parse_config_file(opts.config_path);
  else if (!opts.preset_name.empty())
    cfg = preset(opts.preset_name);
  else
    throw ValidationError("need --preset or --config");
  for (const std::string& ov : opts.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ValidationError("--set expects section.key=value: " + ov);
    cfg = with_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
  if (opts.half_width > 0) {
    cfg.half_width = opts.half_width;
    cfg.auto_half_width = false;
  }
  return cfg;
}

struct Prepared {
  HamiltonianFourierSeries series;
  NoiseModel noise;
  std::vector<double> grid;
  int half_width;
  int detected_mode;
};

Prepared prepare(ExperimentConfig& cfg) {
  HamiltonianFourierSeries series = build_fourier_series(cfg.model);
  NoiseModel noise = noise_matrix(cfg.model.modes);
  std::vector<double> grid = cfg.grid.make();
  int detected = cfg.has_detection ? cfg.detection.mode : 0;
  if (cfg.auto_half_width) {
    cfg.half_width = converge_half_width(series, noise, grid, detected,
                                         std::max(2, series.max_harmonic()));
    std::cout << "auto truncation: K = " << cfg.half_width << "\n";
  }
  cfg.half_width = std::max(cfg.half_width, series.max_harmonic());
  return {std::move(series), std::move(noise), std::move(grid),
          cfg.half_width, detected};
}

SpectrumResult run_method(const Prepared& p, const ExperimentConfig& cfg,
                          const std::string& method) {
  if (method == "iterative")
    return iterative_spectrum(p.series, p.noise, p.grid, cfg.iterative_order,
                              p.detected_mode);
  SpectrumResult full;
  if (method == "shifted")
    full = spectrum_shifted(p.series, p.noise, p.grid, p.half_width);
  else if (method == "floquet")
    full = spectrum_floquet(p.series, p.noise, p.grid, p.half_width);
  else if (method == "oracle")
    full = standard_spectrum_oracle(p.series, p.noise, p.grid);
  else
    throw ValidationError("unknown method: " + method);
  return project_quadrature(full, p.detected_mode, 0.0, "S_yy");
}

double max_rel_dev(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0, dev = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < a.size(); ++i)
    dev = std::max(dev, std::abs(a[i] - b[i]));
  return scale > 0 ? dev / scale : dev;
}

int cmd_spectrum(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  Prepared p = prepare(cfg);
  std::vector<std::string> files;
  for (const std::string& method : cfg.methods) {
    SpectrumResult spec = run_method(p, cfg, method);
    const std::string path = cfg.output_dir + "/spectrum_" + method + ".csv";
    write_spectrum_csv(path, spec);
    files.push_back(path);
    std::cout << method << " -> " << path << "\n";
  }
  write_manifest(cfg.output_dir + "/manifest.json", cfg, {}, files);
  return 0;
}

int cmd_compare(const CommonOpts& opts, double equivalence_tol) {
  ExperimentConfig cfg = load_config(opts);
  if (cfg.methods.size() < 2)
    throw ValidationError("compare needs at least two methods");
  Prepared p = prepare(cfg);

  std::vector<SpectrumResult> specs;
  std::vector<std::string> files;
  for (const std::string& method : cfg.methods) {
    specs.push_back(run_method(p, cfg, method));
    const std::string path = cfg.output_dir + "/compare_" + method + ".csv";
    write_spectrum_csv(path, specs.back());
    files.push_back(path);
  }

  const double wd = cfg.model.drive_frequency;
  double mech_freq = 1.0;
  for (const auto& m : cfg.model.modes)
    if (m.kind == ModeKind::Mechanical) mech_freq = m.frequency;

  bool equivalence_failed = false;
  std::vector<std::pair<std::string, std::string>> extra;
  for (size_t i = 0; i < specs.size(); ++i) {
    if (wd > 0) {
      const SidebandRatio r = sideband_ratio(specs[i], mech_freq, wd);
      std::printf("%-10s R = %.6f  peaks (%.5f, %.5f)\n",
                  cfg.methods[i].c_str(), r.ratio, r.omega_minus, r.omega_plus);
    }
    for (size_t j = i + 1; j < specs.size(); ++j) {
      const double dev = max_rel_dev(specs[i].values, specs[j].values);
      std::printf("%s vs %s: max rel deviation %.3e\n", cfg.methods[i].c_str(),
                  cfg.methods[j].c_str(), dev);
      extra.emplace_back(cfg.methods[i] + "_vs_" + cfg.methods[j],
                         std::to_string(dev));
      const bool analytic_pair =
          (cfg.methods[i] == "shifted" && cfg.methods[j] == "floquet") ||
          (cfg.methods[i] == "floquet" && cfg.methods[j] == "shifted");
      if (analytic_pair && dev > equivalence_tol) equivalence_failed = true;
    }
  }
  write_manifest(cfg.output_dir + "/manifest.json", cfg, extra, files);
  if (equivalence_failed) {
    std::cerr << "method equivalence assertion failed\n";
    return 4;
  }
  return 0;
}

double ratio_at(const ExperimentConfig& base, const std::string& path,
                double value) {
  ExperimentConfig cfg =
      with_override(base, path, std::to_string(value));
  Prepared p = prepare(cfg);
  SpectrumResult spec = project_quadrature(
      spectrum_shifted(p.series, p.noise, p.grid, p.half_width),
      p.detected_mode, 0.0, "S_yy");
  double mech_freq = 1.0;
  for (const auto& m : cfg.model.modes)
    if (m.kind == ModeKind::Mechanical) mech_freq = m.frequency;
  return sideband_ratio(spec, mech_freq, cfg.model.drive_frequency).ratio;
}

int cmd_sweep(const CommonOpts& opts, bool find_suppression) {
  ExperimentConfig cfg = load_config(opts);
  Prepared p0 = prepare(cfg);
  double mech_freq = 1.0;
  for (const auto& m : cfg.model.modes)
    if (m.kind == ModeKind::Mechanical) mech_freq = m.frequency;
  const double wd = cfg.model.drive_frequency;

  std::vector<std::string> files;
  std::vector<std::pair<std::string, std::string>> extra;
  if (!cfg.sweep.path.empty()) {
    std::printf("%-14s %-10s\n", cfg.sweep.path.c_str(), "R");
    for (size_t i = 0; i < cfg.sweep.values.size(); ++i) {
      const double v = cfg.sweep.values[i];
      ExperimentConfig point =
          with_override(cfg, cfg.sweep.path, std::to_string(v));
      Prepared p = prepare(point);
      SpectrumResult spec = project_quadrature(
          spectrum_shifted(p.series, p.noise, p.grid, p.half_width),
          p.detected_mode, 0.0, "S_yy");
      const SidebandRatio r = sideband_ratio(spec, mech_freq, wd);
      std::printf("%-14.6g %-10.6f\n", v, r.ratio);
      const std::string path =
          cfg.output_dir + "/sweep_" + std::to_string(i) + ".csv";
      write_spectrum_csv(path, spec);
      files.push_back(path);
      extra.emplace_back("R_" + std::to_string(i), std::to_string(r.ratio));
    }
  }

  if (find_suppression) {
    // golden-section on R(omega_2) over omega_2/wd in [1, 2]
    const std::string path = "modulation.wm.amplitude";
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1.0 * wd, b = 2.0 * wd;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = ratio_at(cfg, path, c), fd = ratio_at(cfg, path, d);
    while ((b - a) / wd > 0.01) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = ratio_at(cfg, path, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = ratio_at(cfg, path, d);
      }
    }
    const double xmin = 0.5 * (a + b);
    const double rmin = ratio_at(cfg, path, xmin);
    std::printf("suppression point: omega_2/omega_d = %.4f (R = %.5f)\n",
                xmin / wd, rmin);
    extra.emplace_back("suppression_ratio", std::to_string(xmin / wd));
    extra.emplace_back("suppression_R", std::to_string(rmin));
  }
  write_manifest(cfg.output_dir + "/manifest.json", cfg, extra, files);
  return 0;
}

int cmd_homodyne_map(const CommonOpts& opts, int phi_points) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.has_detection ||
      cfg.detection.type != DetectionType::OutputHomodyne)
    throw ValidationError("homodyne-map needs output-homodyne detection");
  Prepared p = prepare(cfg);

  std::vector<double> phis(phi_points);
  for (int i = 0; i < phi_points; ++i)
    phis[i] = M_PI * i / (phi_points - 1);
  std::vector<std::vector<double>> values(phis.size());
  double best = 1e300, best_phi = 0.0, best_omega = 0.0;
  for (size_t j = 0; j < phis.size(); ++j) {
    DetectionSpec det = cfg.detection;
    det.phase = phis[j];
    SpectrumResult s =
        homodyne_spectrum(p.series, p.noise, det, p.grid, p.half_width);
    values[j] = s.values;
    for (size_t i = 0; i < p.grid.size(); ++i)
      if (s.values[i] < best) {
        best = s.values[i];
        best_phi = phis[j];
        best_omega = p.grid[i];
      }
  }
  const std::string path = cfg.output_dir + "/homodyne_map.csv";
  write_map_csv(path, p.grid, phis, values);
  const double db = -10.0 * std::log10(best);
  std::printf(
      "map -> %s\nmin S_hom = %.5f (%.2f dB below floor) at phi = %.4f, "
      "omega = %.4f\n",
      path.c_str(), best, db, best_phi, best_omega);
  write_manifest(cfg.output_dir + "/manifest.json", cfg,
                 {{"min_S_hom", std::to_string(best)},
                  {"squeezing_dB", std::to_string(db)},
                  {"argmin_phi", std::to_string(best_phi)},
                  {"argmin_omega", std::to_string(best_omega)}},
                 {path});
  return 0;
}

int cmd_heterodyne(const CommonOpts& opts, double beat) {
  ExperimentConfig cfg = load_config(opts);
  Prepared p = prepare(cfg);
  if (beat == 0.0) beat = cfg.detection.beat;
  SpectrumResult cross =
      heterodyne_cross(p.series, p.noise, beat, p.grid, p.half_width);
  const int r = 2 * p.detected_mode;
  SpectrumResult proj;
  proj.omega = cross.omega;
  proj.values.resize(cross.omega.size());
  for (size_t i = 0; i < cross.omega.size(); ++i)
    proj.values[i] = std::abs(cross.matrices[i](r, r));
  proj.projection = "abs_cross_aa";
  const std::string path = cfg.output_dir + "/heterodyne_cross.csv";
  write_spectrum_csv(path, proj);
  std::cout << "heterodyne cross (|<a(w+Omega) a^dag(w-Omega)>|) -> " << path
            << "\n";
  write_manifest(cfg.output_dir + "/manifest.json", cfg,
                 {{"beat", std::to_string(beat)}}, {path});
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  Prepared p = prepare(cfg);
  if (!cfg.has_simulation) cfg.sde = SdeConfig{};
  PsdEstimate psd = ensemble_psd(p.series, p.noise, cfg.sde);
  SpectrumResult analytic = project_quadrature(
      semiclassical_analytic(p.series, p.noise, p.grid, p.half_width),
      cfg.sde.mode, 0.0, "S_yy");
  const std::string sim_path = cfg.output_dir + "/psd_simulated.csv";
  const std::string ana_path = cfg.output_dir + "/psd_analytic.csv";
  write_psd_csv(sim_path, psd);
  write_spectrum_csv(ana_path, analytic);
  std::printf("simulated PSD (%d segments) -> %s\nanalytic -> %s\n",
              psd.segments, sim_path.c_str(), ana_path.c_str());
  write_manifest(cfg.output_dir + "/manifest.json", cfg,
                 {{"segments", std::to_string(psd.segments)}},
                 {sim_path, ana_path});
  return 0;
}

int cmd_converge(const CommonOpts& opts, double tol) {
  ExperimentConfig cfg = load_config(opts);
  HamiltonianFourierSeries series = build_fourier_series(cfg.model);
  NoiseModel noise = noise_matrix(cfg.model.modes);
  std::vector<double> grid = cfg.grid.make();
  const int detected = cfg.has_detection ? cfg.detection.mode : 0;
  const int k = converge_half_width(series, noise, grid, detected,
                                    std::max(2, series.max_harmonic()), tol);
  std::printf("converged at K = %d (tolerance %.1e)\n", k, tol);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum noise spectra of periodically modulated linearized "
               "optomechanical systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  double equivalence_tol = 1e-9;
  bool find_suppression = false;
  int phi_points = 65;
  double beat = 0.0;
  double converge_tol = 1e-8;

  auto* spectrum = app.add_subcommand("spectrum", "compute spectra");
  add_common(spectrum, opts);
  auto* compare = app.add_subcommand("compare", "cross-method comparison");
  add_common(compare, opts);
  compare->add_option("--tol", equivalence_tol,
                      "shifted/floquet equivalence tolerance");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep, opts);
  sweep->add_flag("--suppression", find_suppression,
                  "locate the sideband suppression point");
  auto* hmap = app.add_subcommand("homodyne-map", "phi x omega homodyne map");
  add_common(hmap, opts);
  hmap->add_option("--phi-points", phi_points, "phi grid size");
  auto* het = app.add_subcommand("heterodyne", "heterodyne cross-correlation");
  add_common(het, opts);
  het->add_option("--beat", beat, "local oscillator beat Omega");
  auto* sim = app.add_subcommand("simulate", "stochastic verification");
  add_common(sim, opts);
  auto* conv = app.add_subcommand("converge", "truncation convergence sweep");
  add_common(conv, opts);
  conv->add_option("--tol", converge_tol, "relative tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(opts);
    if (compare->parsed()) return cmd_compare(opts, equivalence_tol);
    if (sweep->parsed()) return cmd_sweep(opts, find_suppression);
    if (hmap->parsed()) return cmd_homodyne_map(opts, phi_points);
    if (het->parsed()) return cmd_heterodyne(opts, beat);
    if (sim->parsed()) return cmd_simulate(opts);
    if (conv->parsed()) return cmd_converge(opts, converge_tol);
  } catch (const modspec::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const modspec::ContractError& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return 2;
  } catch (const modspec::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << " (omega = " << e.omega
              << ", condition = " << e.condition << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
