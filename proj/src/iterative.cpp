#include "modspec/iterative.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "modspec/parallel.hpp"

namespace modspec {

namespace {

// Term key: (frequency shift in units of wd, operator row index).
using Key = std::pair<int, int>;
using CoeffMap = std::map<Key, Complex>;

}  // namespace

SpectrumResult iterative_spectrum(const HamiltonianFourierSeries& series,
                                  const NoiseModel& noise,
                                  const std::vector<double>& grid, int order,
                                  int detected_mode) {
  if (order < 1) throw ContractError("iterative order must be >= 1");
  const int d = series.dim();
  const Matrix h0 = series.term(0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (r != c && std::abs(h0(r, c)) > 0)
        throw ContractError(
            "iterative method requires zero static coupling (diagonal H_0)");

  const int kh = series.max_harmonic();
  const Eigen::VectorXd sigma = symplectic_diagonal(series.n_modes());
  std::map<int, Matrix> a_k;  // A_k = i sigma H_k, k != 0
  for (int k = -kh; k <= kh; ++k) {
    if (k == 0) continue;
    Matrix a = I * (sigma.asDiagonal() * series.term(k));
    if (a.cwiseAbs().maxCoeff() > 0) a_k.emplace(k, std::move(a));
  }

  // chi_j(w): diagonal of X(w)^{-1}
  auto chi = [&](int j, double w) -> Complex {
    const Complex xjj =
        -I * w + I * sigma[j] * h0(j, j) + 0.5 * noise.damping[j];
    return 1.0 / xjj;
  };

  SpectrumResult res;
  res.omega = grid;
  res.method = "iterative";
  res.projection = "S_yy";
  res.half_width = order;
  res.values.resize(grid.size());

  const double wd = series.drive_frequency();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int ra = 2 * detected_mode;

  parallel_for(grid.size(), [&](size_t gi) {
    const double w = grid[gi];
    CoeffMap pending;
    CoeffMap noise_coeff;
    pending[{0, ra}] = inv_sqrt2;      // a
    pending[{0, ra + 1}] = inv_sqrt2;  // a^dag

    // order counts substitutions of the shifted equations into the detected
    // quadrature; the initial expansion of y itself is pass 0.
    for (int pass = 0; pass <= order; ++pass) {
      CoeffMap next;
      for (const auto& [key, coef] : pending) {
        const auto [n, j] = key;
        const Complex cj = coef * chi(j, w + n * wd);
        noise_coeff[key] += cj;
        for (const auto& [k, a] : a_k)
          for (int jp = 0; jp < d; ++jp)
            if (std::abs(a(j, jp)) > 0) next[{n + k, jp}] -= cj * a(j, jp);
      }
      pending = std::move(next);
    }

    double s = 0.0;
    for (const auto& [key, coef] : noise_coeff)
      s += std::norm(coef) * noise.correlation[key.second];
    res.values[gi] = s;
  });
  return res;
}

double truncation_equivalence(const HamiltonianFourierSeries& series,
                              const NoiseModel& noise,
                              const std::vector<double>& grid, int order,
                              int detected_mode) {
  const int k = std::max(order, series.max_harmonic());
  const SpectrumResult iter =
      iterative_spectrum(series, noise, grid, order, detected_mode);
  const SpectrumResult full = project_quadrature(
      spectrum_shifted(series, noise, grid, k), detected_mode, 0.0, "S_yy");
  double scale = 0.0;
  for (double v : full.values) scale = std::max(scale, std::abs(v));
  double dev = 0.0;
  for (size_t i = 0; i < grid.size(); ++i)
    dev = std::max(dev, std::abs(iter.values[i] - full.values[i]) / scale);
  return dev;
}

}  // namespace modspec
