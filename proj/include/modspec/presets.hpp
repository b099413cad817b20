#ifndef MODSPEC_PRESETS_HPP
#define MODSPEC_PRESETS_HPP

#include <string>
#include <vector>

#include "modspec/config.hpp"

namespace modspec {

/// Canonical configuration text for a named preset:
///  - "standard": unmodulated single optical + mechanical mode
///  - "fig2a":    doubly modulated hybrid-trap system, intracavity readout
///  - "fig2c":    fig2a restyled for cooperativity sweeps
///  - "fig3":     cooling + resonant probe optical modes, homodyne readout
std::string preset_text(const std::string& name);

ExperimentConfig preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace modspec

#endif
