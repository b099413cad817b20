#ifndef MODSPEC_IO_HPP
#define MODSPEC_IO_HPP

#include <string>
#include <vector>

#include "modspec/config.hpp"
#include "modspec/spectra.hpp"
#include "modspec/stochastic.hpp"

namespace modspec {

/// Writes "omega,value" (plus ",stderr" when errors are present) rows.
void write_spectrum_csv(const std::string& path, const SpectrumResult& spec);

void write_psd_csv(const std::string& path, const PsdEstimate& psd);

/// Dense matrix CSV with a phi header row: rows are omega, columns phi.
void write_map_csv(const std::string& path, const std::vector<double>& omega,
                   const std::vector<double>& phi,
                   const std::vector<std::vector<double>>& values);

/// JSON run manifest: effective configuration text, parameters, tolerances,
/// seeds, produced files. Byte-stable for fixed inputs.
void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra,
                    const std::vector<std::string>& files);

}  // namespace modspec

#endif
