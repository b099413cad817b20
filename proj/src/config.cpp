#include "modspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace modspec {

std::vector<double> GridSpec::make() const {
  if (points < 2 || !(max > min))
    throw ValidationError("grid: need points >= 2 and max > min");
  std::vector<double> g(points);
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = min + i * step;
  return g;
}

std::string* RawConfig::find(const std::string& section,
                             const std::string& key) {
  for (auto& [name, entries] : sections) {
    if (name != section) continue;
    for (auto& [k, v] : entries)
      if (k == key) return &v;
  }
  return nullptr;
}

void RawConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  if (std::string* v = find(section, key)) {
    *v = value;
    return;
  }
  for (auto& [name, entries] : sections) {
    if (name == section) {
      entries.emplace_back(key, value);
      return;
    }
  }
  sections.push_back({section, {{key, value}}});
}

std::string RawConfig::text() const {
  std::ostringstream out;
  for (const auto& [name, entries] : sections) {
    out << "[" << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
    out << "\n";
  }
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("line " + std::to_string(lineno) +
                              ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      raw.sections.push_back({section, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw ValidationError("line " + std::to_string(lineno) +
                            ": expected 'key = value' inside a section");
    raw.sections.back().second.emplace_back(trim(line.substr(0, eq)),
                                            trim(line.substr(eq + 1)));
  }
  return raw;
}

class SectionReader {
 public:
  SectionReader(const std::string& name,
                const std::vector<std::pair<std::string, std::string>>& entries)
      : name_(name), entries_(entries), used_(entries.size(), false) {}

  bool has(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == key; });
  }

  std::string get(const std::string& key) {
    for (size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].first == key) {
        used_[i] = true;
        return entries_[i].second;
      }
    throw ValidationError("[" + name_ + "]: missing required key '" + key + "'");
  }

  std::string get_or(const std::string& key, const std::string& fallback,
                     std::vector<std::string>* defaulted = nullptr) {
    if (has(key)) return get(key);
    if (defaulted) defaulted->push_back(name_ + "." + key + " = " + fallback);
    return fallback;
  }

  double number(const std::string& key) { return parse_number(key, get(key)); }

  double number_or(const std::string& key, double fallback,
                   std::vector<std::string>* defaulted = nullptr) {
    if (!has(key)) {
      if (defaulted)
        defaulted->push_back(name_ + "." + key + " = " +
                             std::to_string(fallback));
      return fallback;
    }
    return number(key);
  }

  void finish() const {
    for (size_t i = 0; i < entries_.size(); ++i)
      if (!used_[i])
        throw ValidationError("[" + name_ + "]: unknown key '" +
                              entries_[i].first + "'");
  }

 private:
  double parse_number(const std::string& key, const std::string& v) const {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError("[" + name_ + "]." + key + ": not a number: '" + v +
                          "'");
  }

  std::string name_;
  std::vector<std::pair<std::string, std::string>> entries_;
  mutable std::vector<bool> used_;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw = tokenize(text);

  for (const auto& [name, entries] : cfg.raw.sections) {
    SectionReader sec(name, entries);
    if (name == "units") {
      cfg.unit_scale = sec.number_or("reference", 1.0);
    } else if (name.rfind("mode.", 0) == 0) {
      ModeSpec m;
      m.name = name.substr(5);
      const std::string kind = sec.get("kind");
      if (kind == "optical")
        m.kind = ModeKind::Optical;
      else if (kind == "mechanical")
        m.kind = ModeKind::Mechanical;
      else
        throw ValidationError("[" + name + "].kind: expected optical|mechanical");
      m.frequency = m.kind == ModeKind::Optical ? sec.number("detuning")
                                                : sec.number("frequency");
      m.damping = sec.number("damping");
      m.occupation = sec.number_or("occupation", 0.0, &cfg.defaulted);
      cfg.model.modes.push_back(m);
    } else if (name.rfind("coupling.", 0) == 0) {
      CouplingSpec c;
      c.mode_a = sec.get("optical");
      c.mode_b = sec.get("mechanical");
      c.strength = sec.number("g");
      cfg.model.couplings.push_back(c);
    } else if (name.rfind("modulation.", 0) == 0) {
      ModulationSpec m;
      const std::string target = sec.get("target");
      if (target == "coupling") {
        m.target = ModTarget::Coupling;
        m.mode_a = sec.get("optical");
        m.mode_b = sec.get("mechanical");
      } else if (target == "mech-frequency") {
        m.target = ModTarget::MechFrequency;
        m.mode_a = sec.get("mode");
      } else if (target == "detuning") {
        m.target = ModTarget::Detuning;
        m.mode_a = sec.get("mode");
      } else {
        throw ValidationError("[" + name +
                              "].target: expected coupling|mech-frequency|detuning");
      }
      m.harmonic = static_cast<int>(sec.number_or("harmonic", 1.0, &cfg.defaulted));
      const double amp = sec.number("amplitude");
      const std::string waveform = sec.get_or("waveform", "sin", &cfg.defaulted);
      // p(t) += 2 amp sin(k wd t) or 2 amp cos(k wd t); `harmonic` places
      // e^{i k wd t} with a raw complex amplitude (real part only here).
      if (waveform == "sin")
        m.amplitude = Complex(0.0, -amp);
      else if (waveform == "cos")
        m.amplitude = Complex(amp, 0.0);
      else if (waveform == "harmonic")
        m.amplitude = Complex(amp, 0.0);
      else
        throw ValidationError("[" + name + "].waveform: expected sin|cos|harmonic");
      cfg.model.modulations.push_back(m);
    } else if (name == "drive") {
      cfg.model.drive_frequency = sec.number("frequency");
    } else if (name == "grid") {
      cfg.grid.min = sec.number_or("min", 0.5, &cfg.defaulted);
      cfg.grid.max = sec.number_or("max", 1.5, &cfg.defaulted);
      cfg.grid.points =
          static_cast<int>(sec.number_or("points", 2048, &cfg.defaulted));
    } else if (name == "transfer") {
      const std::string k = sec.get_or("K", "8", &cfg.defaulted);
      if (k == "auto") {
        cfg.auto_half_width = true;
      } else {
        cfg.half_width = std::stoi(k);
      }
    } else if (name == "methods") {
      cfg.methods = split_ws(sec.get("use"));
    } else if (name == "iterative") {
      cfg.iterative_order =
          static_cast<int>(sec.number_or("order", 2.0, &cfg.defaulted));
    } else if (name == "detection") {
      cfg.has_detection = true;
      cfg.detection.mode = -1;  // resolved below, needs the mode list
      const std::string mode = sec.get("mode");
      const std::string type =
          sec.get_or("type", "output-homodyne", &cfg.defaulted);
      if (type == "intracavity")
        cfg.detection.type = DetectionType::Intracavity;
      else if (type == "output-homodyne")
        cfg.detection.type = DetectionType::OutputHomodyne;
      else if (type == "output-heterodyne")
        cfg.detection.type = DetectionType::OutputHeterodyne;
      else
        throw ValidationError("[detection].type: unknown type '" + type + "'");
      cfg.detection.phase = sec.number_or("phi", 0.0, &cfg.defaulted);
      cfg.detection.beat = sec.number_or("beat", 0.0, &cfg.defaulted);
      cfg.raw.set("detection", "mode", mode);  // keep for resolution below
    } else if (name == "sweep") {
      cfg.sweep.path = sec.get("path");
      for (const std::string& v : split_ws(sec.get("values")))
        cfg.sweep.values.push_back(std::stod(v));
    } else if (name == "simulate") {
      cfg.has_simulation = true;
      cfg.sde.dt = sec.number_or("dt", 0.02, &cfg.defaulted);
      cfg.sde.burn_in = sec.number_or("burn_in", 200.0, &cfg.defaulted);
      cfg.sde.segments =
          static_cast<int>(sec.number_or("segments", 200, &cfg.defaulted));
      cfg.sde.segment_length = static_cast<int>(
          sec.number_or("segment_length", 65536, &cfg.defaulted));
      cfg.sde.seed = static_cast<std::uint64_t>(
          sec.number_or("seed", 24243.0, &cfg.defaulted));
      cfg.sde.mode = static_cast<int>(sec.number_or("mode", 0, &cfg.defaulted));
    } else if (name == "output") {
      cfg.output_dir = sec.get_or("dir", "out", &cfg.defaulted);
    } else {
      throw ValidationError("unknown section [" + name + "]");
    }
    sec.finish();
  }

  if (cfg.model.modes.empty())
    throw ValidationError("config declares no [mode.*] sections");
  if (cfg.methods.empty()) {
    cfg.methods = {"shifted"};
    cfg.defaulted.push_back("methods.use = shifted");
  }
  for (const auto& m : cfg.methods)
    if (m != "shifted" && m != "floquet" && m != "iterative" && m != "oracle")
      throw ValidationError("methods.use: unknown method '" + m + "'");

  // unit conversion: stored values are divided by the reference frequency
  if (cfg.unit_scale != 1.0) {
    const double s = cfg.unit_scale;
    for (auto& m : cfg.model.modes) {
      m.frequency /= s;
      m.damping /= s;
    }
    for (auto& c : cfg.model.couplings) c.strength /= s;
    for (auto& m : cfg.model.modulations) m.amplitude /= s;
    cfg.model.drive_frequency /= s;
  }

  if (cfg.has_detection) {
    const std::string* mode = cfg.raw.find("detection", "mode");
    cfg.detection.mode = cfg.model.mode_index(*mode);
    if (cfg.model.modes[cfg.detection.mode].kind != ModeKind::Optical)
      throw ValidationError("[detection].mode: detected mode must be optical");
    if (cfg.detection.type == DetectionType::OutputHeterodyne &&
        cfg.model.drive_frequency > 0) {
      const double ratio =
          2.0 * cfg.detection.beat / cfg.model.drive_frequency;
      if (std::abs(ratio - std::lround(ratio)) > 1e-9)
        throw ValidationError(
            "[detection].beat: 2 Omega must be an integer multiple of the "
            "drive frequency");
    }
  }

  cfg.model.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const ExperimentConfig& config) {
  return config.raw.text();
}

ExperimentConfig with_override(const ExperimentConfig& config,
                               const std::string& path,
                               const std::string& value) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos)
    throw ValidationError("override path must be 'section.key': " + path);
  RawConfig raw = config.raw;
  raw.set(path.substr(0, dot), path.substr(dot + 1), value);
  return parse_config(raw.text());
}

}  // namespace modspec
