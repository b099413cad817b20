#include "modspec/model.hpp"

#include <cmath>

namespace modspec {

Matrix HamiltonianFourierSeries::term(int k) const {
  const int a = std::abs(k);
  auto it = terms_.find(a);
  if (it == terms_.end()) return Matrix::Zero(dim(), dim());
  if (k >= 0) return it->second;
  return it->second.adjoint();
}

void HamiltonianFourierSeries::add_term(int k, const Matrix& h) {
  if (k < 0) throw ValidationError("harmonics stored as k >= 0");
  auto it = terms_.find(k);
  if (it == terms_.end())
    terms_.emplace(k, h);
  else
    it->second += h;
}

Matrix HamiltonianFourierSeries::at_time(double t) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (const auto& [k, hk] : terms_) {
    if (k == 0) {
      h += hk;
    } else {
      const Complex phase = std::exp(I * (k * drive_frequency_ * t));
      h += phase * hk + std::conj(phase) * hk.adjoint();
    }
  }
  return h;
}

RealVector NoiseModel::semiclassical() const {
  RealVector n_sc(correlation.size());
  for (Eigen::Index i = 0; i + 1 < correlation.size(); i += 2) {
    // (gamma(n+1) + gamma n)/2 = gamma(n + 1/2)
    const double sym = 0.5 * (correlation[i] + correlation[i + 1]);
    n_sc[i] = sym;
    n_sc[i + 1] = sym;
  }
  return n_sc;
}

int Model::mode_index(const std::string& name) const {
  for (size_t i = 0; i < modes.size(); ++i)
    if (modes[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown mode '" + name + "'");
}

void Model::validate() const {
  if (modes.empty()) throw ValidationError("model has no modes");
  for (const auto& m : modes) {
    if (m.damping <= 0.0)
      throw ValidationError("mode '" + m.name + "': damping must be > 0");
    if (m.occupation < 0.0)
      throw ValidationError("mode '" + m.name + "': occupation must be >= 0");
  }
  for (const auto& c : couplings) {
    const auto& a = modes[mode_index(c.mode_a)];
    const auto& b = modes[mode_index(c.mode_b)];
    if (a.kind != ModeKind::Optical || b.kind != ModeKind::Mechanical)
      throw ValidationError("coupling must join an optical and a mechanical mode");
  }
  bool any_nonzero = false;
  for (const auto& m : modulations) {
    mode_index(m.mode_a);
    if (m.target == ModTarget::Coupling) mode_index(m.mode_b);
    if (m.harmonic == 0 && std::abs(m.amplitude.imag()) > 0)
      throw ValidationError("k=0 modulation amplitude must be real");
    if (std::abs(m.amplitude) > 0 && m.harmonic != 0) any_nonzero = true;
  }
  if (any_nonzero && drive_frequency <= 0.0)
    throw ValidationError("drive frequency must be > 0 when modulations exist");
}

Eigen::VectorXd symplectic_diagonal(int n_modes) {
  Eigen::VectorXd sigma(2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    sigma[2 * i] = 1.0;
    sigma[2 * i + 1] = -1.0;
  }
  return sigma;
}

namespace {

// Coupling pattern E_{ij}: ones on the (i,j) and (j,i) 2x2 cross blocks,
// matching g (a + a^dag)(b + b^dag).
void add_coupling_block(Matrix& h, int i, int j, Complex amp) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      h(2 * i + r, 2 * j + c) += amp;
      h(2 * j + r, 2 * i + c) += amp;
    }
}

void add_diagonal_block(Matrix& h, int i, Complex amp) {
  h(2 * i, 2 * i) += amp;
  h(2 * i + 1, 2 * i + 1) += amp;
}

}  // namespace

HamiltonianFourierSeries build_fourier_series(const Model& model) {
  model.validate();
  const int n = static_cast<int>(model.modes.size());
  HamiltonianFourierSeries series(n, model.drive_frequency);
  const int dim = 2 * n;

  Matrix h0 = Matrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const auto& m = model.modes[i];
    const double diag =
        m.kind == ModeKind::Optical ? -m.frequency : m.frequency;
    add_diagonal_block(h0, i, diag);
  }
  for (const auto& c : model.couplings)
    add_coupling_block(h0, model.mode_index(c.mode_a),
                       model.mode_index(c.mode_b), c.strength);

  // Gather harmonic amplitudes keyed by (target identity, |k|); this lets us
  // both fill in implied conjugates and reject inconsistent explicit pairs.
  struct Entry {
    bool have_pos = false, have_neg = false;
    Complex pos{0, 0}, neg{0, 0};
    ModulationSpec spec;
  };
  std::map<std::string, Entry> harmonics;
  for (const auto& m : model.modulations) {
    if (std::abs(m.amplitude) == 0.0) continue;
    if (m.harmonic == 0) {
      // static shift; fold into H_0
      if (m.target == ModTarget::Coupling)
        add_coupling_block(h0, model.mode_index(m.mode_a),
                           model.mode_index(m.mode_b), m.amplitude.real());
      else if (m.target == ModTarget::MechFrequency)
        add_diagonal_block(h0, model.mode_index(m.mode_a), m.amplitude.real());
      else
        add_diagonal_block(h0, model.mode_index(m.mode_a), -m.amplitude.real());
      continue;
    }
    const std::string key = std::to_string(static_cast<int>(m.target)) + ":" +
                            m.mode_a + ":" + m.mode_b + ":" +
                            std::to_string(std::abs(m.harmonic));
    auto& e = harmonics[key];
    e.spec = m;
    if (m.harmonic > 0) {
      if (e.have_pos) throw ValidationError("duplicate modulation harmonic");
      e.have_pos = true;
      e.pos = m.amplitude;
    } else {
      if (e.have_neg) throw ValidationError("duplicate modulation harmonic");
      e.have_neg = true;
      e.neg = m.amplitude;
    }
  }
  series.add_term(0, h0);

  for (auto& [key, e] : harmonics) {
    if (e.have_pos && e.have_neg &&
        std::abs(e.neg - std::conj(e.pos)) >
            1e-14 * std::max(1.0, std::abs(e.pos)))
      throw ValidationError(
          "modulation harmonics at +k and -k are not complex conjugates");
    const Complex amp = e.have_pos ? e.pos : std::conj(e.neg);
    const int k = std::abs(e.spec.harmonic);
    Matrix hk = Matrix::Zero(dim, dim);
    const int ia = model.mode_index(e.spec.mode_a);
    switch (e.spec.target) {
      case ModTarget::Coupling:
        add_coupling_block(hk, ia, model.mode_index(e.spec.mode_b), amp);
        break;
      case ModTarget::MechFrequency:
        add_diagonal_block(hk, ia, amp);
        break;
      case ModTarget::Detuning:
        add_diagonal_block(hk, ia, -amp);
        break;
    }
    series.add_term(k, hk);
  }
  return series;
}

NoiseModel noise_matrix(const std::vector<ModeSpec>& modes) {
  NoiseModel nm;
  const int n = static_cast<int>(modes.size());
  nm.damping.resize(2 * n);
  nm.correlation.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const auto& m = modes[i];
    if (m.damping <= 0.0) throw ValidationError("damping must be > 0");
    if (m.occupation < 0.0) throw ValidationError("occupation must be >= 0");
    nm.damping[2 * i] = m.damping;
    nm.damping[2 * i + 1] = m.damping;
    nm.correlation[2 * i] = m.damping * (m.occupation + 1.0);
    nm.correlation[2 * i + 1] = m.damping * m.occupation;
  }
  return nm;
}

Matrix drift_matrix(const HamiltonianFourierSeries& series, int k,
                    const NoiseModel& noise) {
  const Eigen::VectorXd sigma = symplectic_diagonal(series.n_modes());
  Matrix drift = -I * (sigma.asDiagonal() * series.term(k));
  if (k == 0)
    drift -= (0.5 * noise.damping).cast<Complex>().asDiagonal().toDenseMatrix();
  return drift;
}

Matrix drift_at_time(const HamiltonianFourierSeries& series, double t,
                     const NoiseModel& noise) {
  const Eigen::VectorXd sigma = symplectic_diagonal(series.n_modes());
  Matrix drift = -I * (sigma.asDiagonal() * series.at_time(t));
  drift -= (0.5 * noise.damping).cast<Complex>().asDiagonal().toDenseMatrix();
  return drift;
}

}  // namespace modspec
