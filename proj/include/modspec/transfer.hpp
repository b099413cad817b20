#ifndef MODSPEC_TRANSFER_HPP
#define MODSPEC_TRANSFER_HPP

#include <optional>

#include "modspec/model.hpp"

namespace modspec {

// Truncated block transfer matrix. Storage uses the "natural" block index
// p in [-K, K]: row p holds the equation for c(w + p wd), column q multiplies
// c(w + q wd). Diagonal blocks are X(w + p wd) = -i(w + p wd) I + i sigma H_0
// + gamma/2; off-diagonal blocks (p, q) are A_{q-p} = i sigma H_{q-p}.
//
// The literature convention T_{sl} (central-row sum over input noises at
// w - l wd, translation T_{ll}(w) = T_{l+n,l+n}(w + n wd)) flips the sign of
// both indices relative to this storage; block(s, l) applies the flip.
class TruncatedTransferMatrix {
 public:
  TruncatedTransferMatrix(int n_modes, int half_width, double omega,
                          double drive_frequency)
      : n_modes_(n_modes),
        half_width_(half_width),
        omega_(omega),
        drive_frequency_(drive_frequency),
        inverse_(Matrix::Zero(size(), size())) {}

  int n_modes() const { return n_modes_; }
  int pair_dim() const { return 2 * n_modes_; }
  int half_width() const { return half_width_; }
  int size() const { return (2 * half_width_ + 1) * pair_dim(); }
  double omega() const { return omega_; }
  double drive_frequency() const { return drive_frequency_; }

  Matrix& inverse() { return inverse_; }
  const Matrix& inverse() const { return inverse_; }
  bool inverted() const { return transfer_.has_value(); }
  const Matrix& transfer() const;

  /// T block in natural indexing: c(w + p wd) = sum_q nat_block(p, q)
  /// c_in(w + q wd).
  Matrix nat_block(int p, int q) const;

  /// T_{sl} in the sign-flipped literature convention:
  /// c(w - s wd) = sum_l T_{sl} c_in(w - l wd).
  Matrix block(int s, int l) const { return nat_block(-s, -l); }

  int offset(int p) const;

 private:
  int n_modes_;
  int half_width_;
  double omega_;
  double drive_frequency_;
  Matrix inverse_;
  std::optional<Matrix> transfer_;

  friend void invert(TruncatedTransferMatrix& tm, double condition_guard);
};

/// Assembles T^{-1} restricted to block indices [-K, K].
TruncatedTransferMatrix assemble_inverse(const HamiltonianFourierSeries& series,
                                         const NoiseModel& noise, double omega,
                                         int half_width);

/// Populates T = (T^{-1})^{-1}; throws NumericalError above the condition
/// guard (default 1e12).
void invert(TruncatedTransferMatrix& tm, double condition_guard = 1e12);

TruncatedTransferMatrix transfer_at(const HamiltonianFourierSeries& series,
                                    const NoiseModel& noise, double omega,
                                    int half_width);

/// Max-abs residual of the translation identity over interior blocks:
/// |T(p, q)(w) - T(p - n, q - n)(w + n wd)| restricted to blocks at least
/// `margin` away from the truncation edge in both matrices.
double translation_residual(const HamiltonianFourierSeries& series,
                            const NoiseModel& noise, double omega,
                            int half_width, int shift, int margin);

}  // namespace modspec

#endif
