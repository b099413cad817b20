#include "modspec/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "modspec/parallel.hpp"

namespace modspec {

namespace {

// Row block p of T, i.e. the d x size slab mapping the stacked input noises
// to c(w + p wd).
Matrix row_block(const TruncatedTransferMatrix& tm, int p) {
  const int d = tm.pair_dim();
  return tm.transfer().block(tm.offset(p), 0, d, tm.size());
}

// Noise diagonal replicated over all 2K+1 blocks.
RealVector stacked_noise(const RealVector& n_diag, int blocks) {
  RealVector out(n_diag.size() * blocks);
  for (int b = 0; b < blocks; ++b)
    out.segment(b * n_diag.size(), n_diag.size()) = n_diag;
  return out;
}

// sum_q A(:, q-block) N B(:, q-block)^dag for d x size slabs A, B.
Matrix correlate(const Matrix& a, const Matrix& b, const RealVector& n_diag) {
  const RealVector n = stacked_noise(n_diag, static_cast<int>(a.cols() / n_diag.size()));
  return a * n.cast<Complex>().asDiagonal() * b.adjoint();
}

}  // namespace

double quadrature_projection(const Matrix& s, int mode, double phi) {
  const int r = 2 * mode;
  const Complex rot = std::exp(2.0 * I * phi);
  const Complex v = s(r, r) + s(r + 1, r + 1) + std::conj(rot) * s(r, r + 1) +
                    rot * s(r + 1, r);
  return 0.5 * v.real();
}

SpectrumResult project_quadrature(const SpectrumResult& full, int mode,
                                  double phi, const std::string& name) {
  SpectrumResult out = full;
  out.matrices.clear();
  out.values.resize(full.matrices.size());
  for (size_t i = 0; i < full.matrices.size(); ++i)
    out.values[i] = quadrature_projection(full.matrices[i], mode, phi);
  out.projection = name;
  return out;
}

SpectrumResult standard_spectrum_oracle(const HamiltonianFourierSeries& series,
                                        const NoiseModel& noise,
                                        const std::vector<double>& grid) {
  if (series.modulated())
    throw ContractError("standard oracle requires an unmodulated system");
  const int d = series.dim();
  const Eigen::VectorXd sigma = symplectic_diagonal(series.n_modes());
  const Matrix is_h0 = I * (sigma.asDiagonal() * series.term(0));
  const Matrix half_gamma =
      (0.5 * noise.damping).cast<Complex>().asDiagonal().toDenseMatrix();

  SpectrumResult res;
  res.omega = grid;
  res.method = "oracle";
  res.matrices.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const Matrix x =
        -I * grid[i] * Matrix::Identity(d, d) + is_h0 + half_gamma;
    const Matrix t = x.inverse();
    res.matrices[i] =
        t * noise.correlation.cast<Complex>().asDiagonal() * t.adjoint();
  }
  return res;
}

SpectrumResult spectrum_shifted(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise,
                                const std::vector<double>& grid,
                                int half_width) {
  SpectrumResult res;
  res.omega = grid;
  res.method = "shifted";
  res.half_width = half_width;
  res.matrices.resize(grid.size());
  parallel_for(grid.size(), [&](size_t i) {
    TruncatedTransferMatrix tm =
        transfer_at(series, noise, grid[i], half_width);
    const Matrix rows = row_block(tm, 0);
    res.matrices[i] = correlate(rows, rows, noise.correlation);
  });
  return res;
}

namespace {

// Central block column of T at the given center frequency: the stacked
// d-column slab C with C(p) = T(p, 0), solved without forming the full
// inverse.
Matrix central_column(const HamiltonianFourierSeries& series,
                      const NoiseModel& noise, double center, int half_width) {
  TruncatedTransferMatrix tm =
      assemble_inverse(series, noise, center, half_width);
  const int d = tm.pair_dim();
  Matrix rhs = Matrix::Zero(tm.size(), d);
  rhs.block(tm.offset(0), 0, d, d) = Matrix::Identity(d, d);
  Eigen::PartialPivLU<Matrix> lu(tm.inverse());
  Matrix col = lu.solve(rhs);
  const double cond = tm.inverse().cwiseAbs().rowwise().sum().maxCoeff() *
                      col.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(cond))
    throw NumericalError("singular transfer matrix", center, cond);
  return col;
}

}  // namespace

SpectrumResult spectrum_floquet(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise,
                                const std::vector<double>& grid,
                                int half_width) {
  const double wd = series.drive_frequency();
  const int d = series.dim();
  SpectrumResult res;
  res.omega = grid;
  res.method = "floquet";
  res.half_width = half_width;
  res.matrices.resize(grid.size());
  const int lmax = series.modulated() ? half_width : 0;
  parallel_for(grid.size(), [&](size_t i) {
    Matrix s = Matrix::Zero(d, d);
    for (int l = -lmax; l <= lmax; ++l) {
      const Matrix col =
          central_column(series, noise, grid[i] + l * wd, half_width);
      // c^(l)(w) lives in natural row -l of the matrix centered at w + l wd
      const Matrix cl = col.block((half_width - l) * d, 0, d, d);
      s += cl * noise.correlation.cast<Complex>().asDiagonal() * cl.adjoint();
    }
    res.matrices[i] = s;
  });
  return res;
}

SpectrumResult spectral_component(const HamiltonianFourierSeries& series,
                                  const NoiseModel& noise,
                                  const std::vector<double>& grid,
                                  int half_width, int fourier_index) {
  if (std::abs(fourier_index) > half_width - series.max_harmonic())
    throw ContractError("Fourier index too large for the truncation");
  SpectrumResult res;
  res.omega = grid;
  res.method = "shifted";
  res.fourier_index = fourier_index;
  res.half_width = half_width;
  res.matrices.resize(grid.size());
  parallel_for(grid.size(), [&](size_t i) {
    TruncatedTransferMatrix tm =
        transfer_at(series, noise, grid[i], half_width);
    const Matrix rows0 = row_block(tm, 0);
    const Matrix rowsm = row_block(tm, fourier_index);
    res.matrices[i] = correlate(rows0, rowsm, noise.correlation);
  });
  return res;
}

Matrix output_pair_matrix(const TruncatedTransferMatrix& tm,
                          const NoiseModel& noise, int mode) {
  const int r = 2 * mode;
  const double kappa = noise.damping[r];
  const double sk = std::sqrt(kappa);
  // a_out = a_in - sqrt(kappa) a; the stacked noise vector carries the
  // scaled a_in, hence the 1/sqrt(kappa) on the direct term.
  Matrix w = -sk * tm.transfer().block(tm.offset(0) + r, 0, 2, tm.size());
  w(0, tm.offset(0) + r) += 1.0 / sk;
  w(1, tm.offset(0) + r + 1) += 1.0 / sk;
  return correlate(w, w, noise.correlation);
}

SpectrumResult homodyne_spectrum(const HamiltonianFourierSeries& series,
                                 const NoiseModel& noise,
                                 const DetectionSpec& detection,
                                 const std::vector<double>& grid,
                                 int half_width) {
  if (detection.type != DetectionType::OutputHomodyne)
    throw ContractError("homodyne_spectrum requires output-homodyne detection");
  const Complex rot = std::exp(2.0 * I * detection.phase);
  SpectrumResult res;
  res.omega = grid;
  res.method = "shifted";
  res.projection = "S_hom";
  res.half_width = half_width;
  res.values.resize(grid.size());
  parallel_for(grid.size(), [&](size_t i) {
    TruncatedTransferMatrix tm =
        transfer_at(series, noise, grid[i], half_width);
    const Matrix s = output_pair_matrix(tm, noise, detection.mode);
    // same LO-phase convention as quadrature_projection: e^{-2i phi} <a a>
    const Complex v =
        s(0, 0) + s(1, 1) + std::conj(rot) * s(0, 1) + rot * s(1, 0);
    res.values[i] = v.real();
  });
  return res;
}

SpectrumResult heterodyne_cross(const HamiltonianFourierSeries& series,
                                const NoiseModel& noise, double beat,
                                const std::vector<double>& grid,
                                int half_width) {
  const double wd = series.drive_frequency();
  if (wd <= 0.0 && beat != 0.0)
    throw ValidationError("heterodyne beat requires a drive frequency");
  int n = 0;
  if (beat != 0.0) {
    const double ratio = 2.0 * beat / wd;
    n = static_cast<int>(std::lround(ratio));
    if (std::abs(ratio - n) > 1e-9)
      throw ValidationError(
          "heterodyne cross-correlations require the resonance condition "
          "2 Omega = n wd with integer n; got 2 Omega / wd = " +
          std::to_string(ratio));
  }
  if (std::abs(n) > half_width - series.max_harmonic())
    throw ContractError("beat harmonic too large for the truncation");

  SpectrumResult res;
  res.omega = grid;
  res.method = "shifted";
  res.fourier_index = -n;
  res.half_width = half_width;
  res.matrices.resize(grid.size());
  const int m = n;
  parallel_for(grid.size(), [&](size_t i) {
    // <c(w + Omega) [c(w - Omega)]^dag>: center the block matrix at
    // w + Omega; c(w - Omega) is its natural row -n.
    TruncatedTransferMatrix tm =
        transfer_at(series, noise, grid[i] + beat, half_width);
    const Matrix rows0 = row_block(tm, 0);
    const Matrix rowsm = row_block(tm, -m);
    res.matrices[i] = correlate(rows0, rowsm, noise.correlation);
  });
  return res;
}

namespace {

struct Peak {
  double omega = 0.0;
  double height = 0.0;
  bool found = false;
};

Peak find_peak(const std::vector<double>& omega,
               const std::vector<double>& v, double lo, double hi) {
  Peak peak;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    if (omega[i] < lo || omega[i] > hi) continue;
    if (v[i] >= v[i - 1] && v[i] >= v[i + 1] && v[i] > peak.height) {
      // parabolic refinement through the three surrounding points
      const double denom = v[i - 1] - 2 * v[i] + v[i + 1];
      double shift = 0.0;
      if (denom != 0.0) shift = 0.5 * (v[i - 1] - v[i + 1]) / denom;
      shift = std::clamp(shift, -0.5, 0.5);
      peak.omega = omega[i] + shift * (omega[i + 1] - omega[i]);
      peak.height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * shift;
      peak.found = true;
    }
  }
  if (!peak.found) {
    // suppressed peak: report the plain maximum over the window
    for (size_t i = 0; i < v.size(); ++i) {
      if (omega[i] < lo || omega[i] > hi) continue;
      if (v[i] > peak.height) {
        peak.height = v[i];
        peak.omega = omega[i];
      }
    }
  }
  return peak;
}

}  // namespace

SidebandRatio sideband_ratio(const SpectrumResult& spec, double mech_freq,
                             double drive_frequency) {
  if (spec.values.empty())
    throw ContractError("sideband_ratio needs a scalar spectrum projection");
  const double wd = drive_frequency;
  const Peak plus =
      find_peak(spec.omega, spec.values, mech_freq + wd / 2, mech_freq + 3 * wd / 2);
  const Peak minus =
      find_peak(spec.omega, spec.values, mech_freq - 3 * wd / 2, mech_freq - wd / 2);
  SidebandRatio r;
  r.peak_plus = plus.height;
  r.peak_minus = minus.height;
  r.omega_plus = plus.omega;
  r.omega_minus = minus.omega;
  r.plus_suppressed = !plus.found;
  r.minus_suppressed = !minus.found;
  r.ratio = minus.height > 0.0 ? plus.height / minus.height : 0.0;
  return r;
}

ResolutionCheck resolution_check(double cooperativity, double gamma_m,
                                 double drive_frequency, double threshold) {
  ResolutionCheck rc;
  rc.margin = cooperativity * gamma_m / (2.0 * drive_frequency);
  rc.resolved = rc.margin < threshold;
  return rc;
}

int converge_half_width(const HamiltonianFourierSeries& series,
                        const NoiseModel& noise,
                        const std::vector<double>& grid, int mode,
                        int initial_half_width, double tol,
                        int max_half_width) {
  int k = std::max(initial_half_width, series.max_harmonic());
  SpectrumResult prev = project_quadrature(
      spectrum_shifted(series, noise, grid, k), mode, 0.0, "S_yy");
  while (k < max_half_width) {
    const int k2 = k * 2;
    SpectrumResult next = project_quadrature(
        spectrum_shifted(series, noise, grid, k2), mode, 0.0, "S_yy");
    double scale = 0.0;
    for (double v : next.values) scale = std::max(scale, std::abs(v));
    double dev = 0.0;
    for (size_t i = 0; i < next.values.size(); ++i)
      dev = std::max(dev, std::abs(next.values[i] - prev.values[i]));
    if (dev <= tol * scale) return k2;
    prev = std::move(next);
    k = k2;
  }
  return k;
}

}  // namespace modspec
