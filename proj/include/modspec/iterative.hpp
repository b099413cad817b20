#ifndef MODSPEC_ITERATIVE_HPP
#define MODSPEC_ITERATIVE_HPP

#include "modspec/spectra.hpp"

namespace modspec {

/// Scalar susceptibilities of the single optical / mechanical mode pair.
struct Susceptibilities {
  double detuning = 0.0;   // Delta-bar
  double kappa = 1.0;
  double mech_freq = 1.0;  // omega_M-bar
  double gamma_m = 0.0;

  Complex chi_o(double w) const {
    return 1.0 / (-I * (w + detuning) + 0.5 * kappa);
  }
  Complex chi_m(double w) const {
    return 1.0 / (-I * (w - mech_freq) + 0.5 * gamma_m);
  }
  Complex mu(double w) const { return chi_m(w) - std::conj(chi_m(-w)); }
  Complex eta(double w) const { return chi_o(w) - std::conj(chi_o(-w)); }
};

/// Method (iii): iterative substitution of the frequency-shifted Langevin
/// equations, run as coefficient algebra keyed by (shift, operator). Each
/// pass replaces every remaining system-operator term c_j(w + n wd) by
/// chi_j(w + n wd) [c_in,j - sum_k A_k c(w + (n+k) wd)]; after `order`
/// passes the residual system terms are dropped and the detected quadrature
/// spectrum is assembled from the accumulated noise coefficients.
///
/// Requires a diagonal H_0 (zero static coupling), the form of the
/// doubly-modulated system; the columns of A_k route every generated term
/// to exactly one input-noise channel at one shifted frequency.
SpectrumResult iterative_spectrum(const HamiltonianFourierSeries& series,
                                  const NoiseModel& noise,
                                  const std::vector<double>& grid, int order,
                                  int detected_mode = 0);

/// Max relative deviation between iterative_spectrum(order) and the
/// shifted-operator pipeline truncated at the matched half-width K = order,
/// both projected on the detected amplitude quadrature.
double truncation_equivalence(const HamiltonianFourierSeries& series,
                              const NoiseModel& noise,
                              const std::vector<double>& grid, int order,
                              int detected_mode = 0);

}  // namespace modspec

#endif
