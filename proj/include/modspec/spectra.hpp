#ifndef MODSPEC_SPECTRA_HPP
#define MODSPEC_SPECTRA_HPP

#include <string>
#include <vector>

#include "modspec/transfer.hpp"

namespace modspec {

/// Spectrum over a frequency grid: either the full 2n x 2n correlation matrix
/// S_{cc^dag}(w) per point, or a named scalar projection.
struct SpectrumResult {
  std::vector<double> omega;
  std::vector<Matrix> matrices;  // empty for scalar-only results
  std::vector<double> values;    // scalar projection, if any
  int fourier_index = 0;
  std::string method;      // shifted | floquet | iterative | stochastic
  std::string projection;  // e.g. "S_yy"
  int half_width = 0;
};

enum class DetectionType { Intracavity, OutputHomodyne, OutputHeterodyne };

struct DetectionSpec {
  int mode = 0;            // detected optical mode index
  double phase = 0.0;      // local oscillator phase phi
  double beat = 0.0;       // heterodyne beat Omega
  DetectionType type = DetectionType::OutputHomodyne;
};

/// Quadrature projection of a correlation matrix: for mode i and phase phi,
/// q = (e^{-i phi} c_i + e^{i phi} c_i^dag)/sqrt(2). phi = 0 gives the
/// amplitude (y) or position (x) quadrature.
double quadrature_projection(const Matrix& s, int mode, double phi = 0.0);

SpectrumResult project_quadrature(const SpectrumResult& full, int mode,
                                  double phi, const std::string& name);

/// Closed-form spectrum of an unmodulated system via a single 2n x 2n
/// inversion per frequency; the oracle for every zero-modulation check.
SpectrumResult standard_spectrum_oracle(const HamiltonianFourierSeries& series,
                                        const NoiseModel& noise,
                                        const std::vector<double>& grid);

/// Method (i), shifted operators: S(w) = sum_q T(0,q) N T(0,q)^dag over the
/// natural column index q, one block-matrix inversion per grid point.
SpectrumResult spectrum_shifted(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise,
                                const std::vector<double>& grid,
                                int half_width);

/// Method (ii), Floquet modes: S(w) = sum_l C_l N C_l^dag with
/// C_l = T(-l, 0) evaluated at center w + l wd; only the central block
/// column is solved for at each shifted center.
SpectrumResult spectrum_floquet(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise,
                                const std::vector<double>& grid,
                                int half_width);

/// m-th Fourier component of the cyclostationary spectrum:
/// S^(m)(w) = lim <c(w) [c(w + m wd)]^dag> = sum_q T(0,q) N T(m,q)^dag.
SpectrumResult spectral_component(const HamiltonianFourierSeries& series,
                                  const NoiseModel& noise,
                                  const std::vector<double>& grid,
                                  int half_width, int fourier_index);

/// Output-field pair correlation matrix of the detected optical mode, from
/// a_out = a_in - sqrt(kappa) a. Entry layout matches the intracavity pair
/// block: (0,0) = <a_out a_out^dag>, (0,1) = <a_out a_out> etc.
Matrix output_pair_matrix(const TruncatedTransferMatrix& tm,
                          const NoiseModel& noise, int mode);

/// S_hom(w) = <a a^dag> + <a^dag a> + e^{2i phi}<a a> + e^{-2i phi}
/// <a^dag a^dag> of the output field; real, shot-noise floor 1 for a vacuum
/// optical bath.
SpectrumResult homodyne_spectrum(const HamiltonianFourierSeries& series,
                                 const NoiseModel& noise,
                                 const DetectionSpec& detection,
                                 const std::vector<double>& grid,
                                 int half_width);

/// Heterodyne cross-correlator <c(w + Omega) [c(w - Omega)]^dag>, nonzero
/// only when 2 Omega = n wd with integer n; equals the spectral component
/// S^(-n) evaluated at w + Omega.
SpectrumResult heterodyne_cross(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise, double beat,
                                const std::vector<double>& grid,
                                int half_width);

struct SidebandRatio {
  double ratio = 0.0;           // height(wM + wd) / height(wM - wd)
  double peak_plus = 0.0;       // interpolated heights
  double peak_minus = 0.0;
  double omega_plus = 0.0;      // interpolated locations
  double omega_minus = 0.0;
  bool plus_suppressed = false;  // no clear local maximum in the window
  bool minus_suppressed = false;
};

/// Twin peaks located by local maxima within +-wd/2 windows around
/// wM +- wd; heights refined by parabolic interpolation.
SidebandRatio sideband_ratio(const SpectrumResult& spec, double mech_freq,
                             double drive_frequency);

struct ResolutionCheck {
  bool resolved = false;
  double margin = 0.0;  // C Gamma_M / (2 wd)
};

/// Split-sideband resolution condition C Gamma_M / (2 wd) << 1.
ResolutionCheck resolution_check(double cooperativity, double gamma_m,
                                 double drive_frequency,
                                 double threshold = 0.1);

/// Doubles K until the max relative change of the projected spectrum drops
/// below tol; returns the converged K.
int converge_half_width(const HamiltonianFourierSeries& series,
                        const NoiseModel& noise,
                        const std::vector<double>& grid, int mode,
                        int initial_half_width, double tol = 1e-8,
                        int max_half_width = 64);

}  // namespace modspec

#endif
