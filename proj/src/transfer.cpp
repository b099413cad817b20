#include "modspec/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace modspec {

const Matrix& TruncatedTransferMatrix::transfer() const {
  if (!transfer_) throw ContractError("transfer matrix not yet inverted");
  return *transfer_;
}

int TruncatedTransferMatrix::offset(int p) const {
  if (std::abs(p) > half_width_)
    throw std::out_of_range("block index out of range");
  return (p + half_width_) * pair_dim();
}

Matrix TruncatedTransferMatrix::nat_block(int p, int q) const {
  const int d = pair_dim();
  return transfer().block(offset(p), offset(q), d, d);
}

TruncatedTransferMatrix assemble_inverse(const HamiltonianFourierSeries& series,
                                         const NoiseModel& noise, double omega,
                                         int half_width) {
  const int kh = series.max_harmonic();
  if (half_width < kh)
    throw ContractError("truncation half-width below the highest harmonic");
  if (!std::isfinite(omega)) throw ContractError("omega must be finite");

  const int n = series.n_modes();
  const int d = 2 * n;
  TruncatedTransferMatrix tm(n, half_width, omega, series.drive_frequency());
  Matrix& m = tm.inverse();

  const Eigen::VectorXd sigma = symplectic_diagonal(n);
  const Matrix is_h0 = I * (sigma.asDiagonal() * series.term(0));
  const Matrix half_gamma =
      (0.5 * noise.damping).cast<Complex>().asDiagonal().toDenseMatrix();
  const double wd = series.drive_frequency();

  for (int p = -half_width; p <= half_width; ++p) {
    const int r = tm.offset(p);
    // X(w + p wd)
    m.block(r, r, d, d) = -I * (omega + p * wd) * Matrix::Identity(d, d) +
                          is_h0 + half_gamma;
    for (int k = -kh; k <= kh; ++k) {
      if (k == 0) continue;
      const int q = p + k;
      if (std::abs(q) > half_width) continue;
      // A_k = i sigma H_k
      m.block(r, tm.offset(q), d, d) =
          I * (sigma.asDiagonal() * series.term(k));
    }
  }
  return tm;
}

void invert(TruncatedTransferMatrix& tm, double condition_guard) {
  const Matrix& m = tm.inverse_;
  Eigen::PartialPivLU<Matrix> lu(m);
  Matrix t = lu.solve(Matrix::Identity(m.rows(), m.cols()));
  const double cond =
      m.cwiseAbs().rowwise().sum().maxCoeff() *
      t.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(cond) || cond > condition_guard)
    throw NumericalError("ill-conditioned transfer matrix", tm.omega_, cond);
  tm.transfer_ = std::move(t);
}

TruncatedTransferMatrix transfer_at(const HamiltonianFourierSeries& series,
                                    const NoiseModel& noise, double omega,
                                    int half_width) {
  TruncatedTransferMatrix tm =
      assemble_inverse(series, noise, omega, half_width);
  invert(tm);
  return tm;
}

double translation_residual(const HamiltonianFourierSeries& series,
                            const NoiseModel& noise, double omega,
                            int half_width, int shift, int margin) {
  const double wd = series.drive_frequency();
  TruncatedTransferMatrix t0 = transfer_at(series, noise, omega, half_width);
  TruncatedTransferMatrix t1 =
      transfer_at(series, noise, omega + shift * wd, half_width);

  double residual = 0.0;
  const int k = half_width;
  for (int p = -k; p <= k; ++p) {
    for (int q = -k; q <= k; ++q) {
      const int ps = p - shift;
      const int qs = q - shift;
      const int edge_distance =
          std::min({k - std::abs(p), k - std::abs(q), k - std::abs(ps),
                    k - std::abs(qs)});
      if (edge_distance < margin) continue;
      const double r =
          (t0.nat_block(p, q) - t1.nat_block(ps, qs)).cwiseAbs().maxCoeff();
      residual = std::max(residual, r);
    }
  }
  return residual;
}

}  // namespace modspec
