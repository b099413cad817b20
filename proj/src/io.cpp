#include "modspec/io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace modspec {

namespace {

std::ofstream open_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  return out;
}

}  // namespace

void write_spectrum_csv(const std::string& path, const SpectrumResult& spec) {
  std::ofstream out = open_out(path);
  if (!spec.values.empty()) {
    out << "omega,value\n";
    for (size_t i = 0; i < spec.omega.size(); ++i)
      out << spec.omega[i] << "," << spec.values[i] << "\n";
  } else {
    // full matrix: one column per entry, row-major
    const int d = static_cast<int>(spec.matrices.at(0).rows());
    out << "omega";
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        out << ",re_" << r << c << ",im_" << r << c;
    out << "\n";
    for (size_t i = 0; i < spec.omega.size(); ++i) {
      out << spec.omega[i];
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          out << "," << spec.matrices[i](r, c).real() << ","
              << spec.matrices[i](r, c).imag();
      out << "\n";
    }
  }
}

void write_psd_csv(const std::string& path, const PsdEstimate& psd) {
  std::ofstream out = open_out(path);
  out << "omega,value,stderr\n";
  for (size_t i = 0; i < psd.omega.size(); ++i)
    out << psd.omega[i] << "," << psd.psd[i] << "," << psd.stderr_psd[i]
        << "\n";
}

void write_map_csv(const std::string& path, const std::vector<double>& omega,
                   const std::vector<double>& phi,
                   const std::vector<std::vector<double>>& values) {
  std::ofstream out = open_out(path);
  out << "omega\\phi";
  for (double p : phi) out << "," << p;
  out << "\n";
  for (size_t i = 0; i < omega.size(); ++i) {
    out << omega[i];
    for (size_t j = 0; j < phi.size(); ++j) out << "," << values[j][i];
    out << "\n";
  }
}

void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra,
                    const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["config"] = emit_config(config);
  j["defaults"] = config.defaulted;
  j["half_width"] = config.half_width;
  j["methods"] = config.methods;
  if (config.has_simulation) j["seed"] = config.sde.seed;
  for (const auto& [k, v] : extra) j[k] = v;
  j["files"] = files;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace modspec
