#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rku {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerances shared by the dense kernels and the Krylov machinery.
namespace tol {
inline constexpr double orth = 1e-12;
inline constexpr double solve = 1e-12;
inline constexpr double pivot = 1e-14;
inline constexpr double deflate = 1e-12;
inline constexpr double axis = 1e-12;
}  // namespace tol

/// Structural hint for dense kernels. Hermitian input is declared, never detected.
enum class Structure { general, hermitian };

enum class ErrorCode {
  invalid_argument,
  rank_deficient,
  singular_shift,
  ill_conditioned_eigenbasis,
  singularity_on_spectrum,
  support_overlaps_spectrum,
  pole_inside_domain,
  eta_not_contracting,
  last_pole_not_infinite,
  indefinite_square_window,
  compressed_not_solvable,
  spectra_intersect,
  denominator_zero,
  m_singular,
  oracle_too_large,
  io_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

}  // namespace rku
