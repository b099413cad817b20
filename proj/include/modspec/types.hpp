#ifndef MODSPEC_TYPES_HPP
#define MODSPEC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace modspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};

/// Invalid model / configuration input.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ill-conditioned or singular linear solve; carries the offending frequency.
struct NumericalError : std::runtime_error {
  double omega;
  double condition;
  NumericalError(const std::string& msg, double w, double cond)
      : std::runtime_error(msg), omega(w), condition(cond) {}
};

/// Operation called outside its contract (e.g. modulated input where an
/// unmodulated one is required).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace modspec

#endif
