#ifndef MODSPEC_CONFIG_HPP
#define MODSPEC_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "modspec/model.hpp"
#include "modspec/spectra.hpp"
#include "modspec/stochastic.hpp"

namespace modspec {

struct GridSpec {
  double min = 0.5;
  double max = 1.5;
  int points = 2048;
  std::vector<double> make() const;
};

struct SweepSpec {
  std::string path;  // "section.key", e.g. "modulation.wm.amplitude"
  std::vector<double> values;
};

/// Raw parsed configuration: ordered sections of key/value pairs. Kept
/// alongside the typed view so sweeps and CLI overrides can rewrite single
/// entries and rebuild.
struct RawConfig {
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
      sections;

  std::string* find(const std::string& section, const std::string& key);
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  std::string text() const;
};

struct ExperimentConfig {
  Model model;
  std::vector<std::string> methods;  // shifted | floquet | iterative | oracle
  GridSpec grid;
  int half_width = 8;
  bool auto_half_width = false;
  int iterative_order = 2;
  DetectionSpec detection;
  bool has_detection = false;
  SweepSpec sweep;
  SdeConfig sde;
  bool has_simulation = false;
  std::string output_dir = "out";
  double unit_scale = 1.0;  // physical Hz per dimensionless unit

  RawConfig raw;

  /// Record of defaults that were filled in during parsing, for the manifest.
  std::vector<std::string> defaulted;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical text round-tripping through parse_config to the same effective
/// configuration.
std::string emit_config(const ExperimentConfig& config);

/// Rebuilds the configuration with one raw entry replaced; path is
/// "section.key" (e.g. "mode.mech.occupation").
ExperimentConfig with_override(const ExperimentConfig& config,
                               const std::string& path,
                               const std::string& value);

}  // namespace modspec

#endif
