#ifndef MODSPEC_STOCHASTIC_HPP
#define MODSPEC_STOCHASTIC_HPP

#include <cstdint>
#include <vector>

#include "modspec/spectra.hpp"

namespace modspec {

struct SdeConfig {
  double dt = 0.02;          // in units of 1/omega_M; adjusted to divide the
                             // drive period when the system is modulated
  double burn_in = 200.0;    // discarded transient, time units
  int segments = 200;        // Welch segments accumulated over the ensemble
  int segment_length = 65536;  // samples per Welch segment (power of two)
  std::uint64_t seed = 0x5eed;
  int mode = 0;  // recorded mode: the phi=0 quadrature sqrt(2) Re c_i(t),
                 // i.e. y for an optical mode, x for a mechanical one
};

struct Trajectory {
  double dt = 0.0;
  std::vector<double> samples;  // recorded quadrature, after burn-in
};

/// Averaged Welch PSD with per-bin standard errors.
struct PsdEstimate {
  std::vector<double> omega;  // angular frequency, two-sided, sorted
  std::vector<double> psd;
  std::vector<double> stderr_psd;
  int segments = 0;
};

/// Semiclassical Langevin integration: exact exponential step of the frozen
/// drift plus an Euler-Maruyama Gaussian increment with per-step variance
/// N_sc,i dt. Propagators over one drive period are precomputed and reused.
Trajectory integrate(const HamiltonianFourierSeries& series,
                     const NoiseModel& noise, const SdeConfig& config,
                     double duration);

/// Welch periodogram: Hann window, 50% overlap, gated-transform
/// normalization so a delta-correlated input of strength C has a flat PSD
/// equal to C.
PsdEstimate estimate_psd(const std::vector<double>& samples, double dt,
                         int segment_length);

/// Runs ensemble members in parallel with decorrelated seeds and merges
/// their periodograms until `config.segments` segments are accumulated.
PsdEstimate ensemble_psd(const HamiltonianFourierSeries& series,
                         const NoiseModel& noise, const SdeConfig& config);

/// The analytic spectrum the simulator must reproduce: the shifted-operator
/// pipeline evaluated with the symmetrized semiclassical noise diagonal
/// gamma_i (n_i + 1/2).
SpectrumResult semiclassical_analytic(const HamiltonianFourierSeries& series,
                                      const NoiseModel& noise,
                                      const std::vector<double>& grid,
                                      int half_width);

}  // namespace modspec

#endif
