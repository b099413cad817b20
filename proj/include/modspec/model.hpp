#ifndef MODSPEC_MODEL_HPP
#define MODSPEC_MODEL_HPP

#include <map>
#include <string>
#include <vector>

#include "modspec/types.hpp"

namespace modspec {

// Operator ordering throughout: c = (c_1, c_1^dag, ..., c_n, c_n^dag) with
// optical modes listed before mechanical ones. Mode i occupies rows/cols
// 2i, 2i+1. All frequencies are dimensionless, in units of the reference
// mechanical frequency.

enum class ModeKind { Optical, Mechanical };

struct ModeSpec {
  std::string name;
  ModeKind kind = ModeKind::Optical;
  // Detuning (optical) or natural frequency (mechanical). The Hamiltonian
  // carries -detuning * a^dag a for optical modes, +frequency * b^dag b for
  // mechanical ones.
  double frequency = 0.0;
  double damping = 1.0;     // gamma_i > 0
  double occupation = 0.0;  // nbar_i >= 0
};

/// Static bilinear coupling g (a + a^dag)(b + b^dag) between an optical and a
/// mechanical mode.
struct CouplingSpec {
  std::string mode_a;  // optical
  std::string mode_b;  // mechanical
  double strength = 0.0;
};

enum class ModTarget { Coupling, MechFrequency, Detuning };

/// One harmonic of a modulated parameter: p(t) += amplitude e^{i k wd t}.
/// If only the k > 0 harmonic is given, the conjugate at -k is implied;
/// explicitly given pairs must be conjugate-consistent.
struct ModulationSpec {
  ModTarget target = ModTarget::Coupling;
  std::string mode_a;  // target mode; for Coupling the optical partner
  std::string mode_b;  // mechanical partner (Coupling only)
  int harmonic = 1;
  Complex amplitude{0.0, 0.0};
};

/// Fourier series {H_k} of the 2n x 2n Hamiltonian matrix,
/// H(t) = sum_k H_k e^{i k wd t}, with H_{-k} = H_k^dag.
class HamiltonianFourierSeries {
 public:
  HamiltonianFourierSeries(int n_modes, double drive_frequency)
      : n_modes_(n_modes), drive_frequency_(drive_frequency) {}

  int n_modes() const { return n_modes_; }
  int dim() const { return 2 * n_modes_; }
  double drive_frequency() const { return drive_frequency_; }
  int max_harmonic() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first;
  }
  bool modulated() const { return max_harmonic() > 0; }

  /// H_k; zero matrix for absent harmonics.
  Matrix term(int k) const;
  void add_term(int k, const Matrix& h);

  const std::map<int, Matrix>& terms() const { return terms_; }

  /// H(t) evaluated by summing the series.
  Matrix at_time(double t) const;

 private:
  int n_modes_;
  double drive_frequency_;
  std::map<int, Matrix> terms_;  // only k >= 0 stored; H_{-k} = H_k^dag
};

/// Diagonal damping matrix gamma = diag(g_1, g_1, ...) and noise correlation
/// N = diag(g_1(n_1+1), g_1 n_1, ...), stored as diagonal vectors.
struct NoiseModel {
  RealVector damping;      // 2n entries, pairwise equal
  RealVector correlation;  // 2n entries, N diagonal

  /// Symmetrized variant N_sc = diag(..., g_i(n_i+1/2), g_i(n_i+1/2), ...)
  /// used by the semiclassical simulator and its analytic counterpart.
  RealVector semiclassical() const;
};

struct Model {
  std::vector<ModeSpec> modes;
  std::vector<CouplingSpec> couplings;
  std::vector<ModulationSpec> modulations;
  double drive_frequency = 0.0;  // wd; required when modulations exist

  int mode_index(const std::string& name) const;
  void validate() const;
};

/// 2n x 2n symplectic form sigma = diag(1, -1, 1, -1, ...).
Eigen::VectorXd symplectic_diagonal(int n_modes);

HamiltonianFourierSeries build_fourier_series(const Model& model);

NoiseModel noise_matrix(const std::vector<ModeSpec>& modes);

/// k-th Fourier component of the Langevin drift:
/// -i sigma H_k - (gamma/2) [k==0].
Matrix drift_matrix(const HamiltonianFourierSeries& series, int k,
                    const NoiseModel& noise);

/// Full drift at time t: -i sigma H(t) - gamma/2.
Matrix drift_at_time(const HamiltonianFourierSeries& series, double t,
                     const NoiseModel& noise);

}  // namespace modspec

#endif
