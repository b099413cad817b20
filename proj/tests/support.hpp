#ifndef MODSPEC_TESTS_SUPPORT_HPP
#define MODSPEC_TESTS_SUPPORT_HPP

#include <vector>

#include "modspec/model.hpp"

namespace modspec::testing {

struct HybridParams {
  double gbar = 0.04;       // coupling modulation depth, g(t) = 2 gbar sin(wd t)
  double w2 = 0.045;        // mech-frequency depth, wM(t) = 1 + 2 w2 cos(2 wd t)
  double d2 = 0.0;          // detuning depth at harmonic 2
  double wd = 0.05;
  double detuning = -1.0;   // Delta-bar
  double kappa = 1.0;
  double gamma_m = 1e-5;
  double nbar_b = 1e6;
  double g_static = 0.0;
};

/// One cavity + one mechanical mode with the doubly modulated waveforms
/// g(t) = 2 gbar sin(wd t) and wM(t) = wM + 2 w2 cos(2 wd t).
inline Model hybrid_model(const HybridParams& p = {}) {
  Model m;
  m.modes = {{"cav", ModeKind::Optical, p.detuning, p.kappa, 0.0},
             {"mech", ModeKind::Mechanical, 1.0, p.gamma_m, p.nbar_b}};
  m.drive_frequency = p.wd;
  if (p.g_static != 0.0) m.couplings.push_back({"cav", "mech", p.g_static});
  if (p.gbar != 0.0) {
    ModulationSpec g;
    g.target = ModTarget::Coupling;
    g.mode_a = "cav";
    g.mode_b = "mech";
    g.harmonic = 1;
    g.amplitude = Complex(0.0, -p.gbar);  // 2 gbar sin = -i gbar e^{iwt} + c.c.
    m.modulations.push_back(g);
  }
  if (p.w2 != 0.0) {
    ModulationSpec w;
    w.target = ModTarget::MechFrequency;
    w.mode_a = "mech";
    w.harmonic = 2;
    w.amplitude = Complex(p.w2, 0.0);  // 2 w2 cos = w2 e^{2iwt} + c.c.
    m.modulations.push_back(w);
  }
  if (p.d2 != 0.0) {
    ModulationSpec d;
    d.target = ModTarget::Detuning;
    d.mode_a = "cav";
    d.harmonic = 2;
    d.amplitude = Complex(p.d2, 0.0);
    m.modulations.push_back(d);
  }
  return m;
}

/// Static coupled optomechanical model, no modulation.
inline Model static_model(double g = 0.04, double nbar_b = 1e4,
                          double gamma_m = 1e-5) {
  HybridParams p;
  p.gbar = 0.0;
  p.w2 = 0.0;
  p.g_static = g;
  p.nbar_b = nbar_b;
  p.gamma_m = gamma_m;
  Model m = hybrid_model(p);
  m.drive_frequency = 0.05;  // harmless; no modulations reference it
  return m;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * i / double(n - 1);
  return g;
}

}  // namespace modspec::testing

#endif
