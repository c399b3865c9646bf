#pragma once

#include <vector>

#include "rku/types.hpp"

namespace rku {

/// Throws invalid_argument if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* name);

/// Orthonormal basis of range(W) by column-wise Gram-Schmidt with one
/// unconditional reorthogonalization pass (CGS2).
///
/// A column whose norm after orthogonalization drops below
/// tol::deflate times its initial norm raises ErrorCode::rank_deficient.
Matrix qr_orthonormalize(const Matrix& w);

/// Orthonormalizes the columns of W against the orthonormal columns of Q and
/// against each other (CGS2). Q may have zero columns. The rank test is
/// relative to the column norms of W before any projection.
Matrix orthonormalize_against(const Matrix& q, Matrix w);

/// LU factorization of A - xi*I that serves both A - xi*I and its adjoint.
class ShiftedFactorization {
 public:
  ShiftedFactorization(const Matrix& a, Scalar shift);

  Scalar shift() const noexcept { return shift_; }

  /// Solves (A - xi I) X = Y.
  Matrix solve(const Matrix& y) const;
  /// Solves (A - xi I)^* X = Y, i.e. (A^* - conj(xi) I) X = Y.
  Matrix solve_adjoint(const Matrix& y) const;

 private:
  Scalar shift_;
  Eigen::PartialPivLU<Matrix> lu_;
};

/// Factorizes A - xi*I. Raises singular_shift when a pivot is smaller than
/// tol::pivot * max(|A|_1, |xi|).
ShiftedFactorization shifted_factorize(const Matrix& a, Scalar xi);

struct SpectralDecomposition {
  enum class Kind { hermitian_unitary, general_similarity };

  Vector eigenvalues;
  Matrix transform;
  /// Inverse of transform; equals transform^* for the unitary kind.
  Matrix inverse_transform;
  Kind kind = Kind::hermitian_unitary;
  /// 2-norm condition number of transform (1 for the unitary kind).
  double condition = 1.0;
};

/// Eigenvalue cap on the eigenvector condition number: 1/sqrt(machine eps).
double eigenbasis_condition_cap();

/// Hermitian inputs give ascending real eigenvalues and a unitary transform.
/// General inputs are diagonalized; ill_conditioned_eigenbasis is raised when
/// the eigenvector matrix has condition number above eigenbasis_condition_cap()
/// unless allow_ill_conditioned is set (the condition is still reported).
SpectralDecomposition spectral_decompose(const Matrix& a, Structure s,
                                         bool allow_ill_conditioned = false);

/// Ascending eigenvalues of a Hermitian matrix.
RealVector hermitian_eigenvalues(const Matrix& a);

/// Spectral norm, computed as the square root of the largest eigenvalue of
/// the smaller Gram matrix.
double spectral_norm(const Matrix& a);

/// Sine of the largest principal angle between range(X) and range(Y).
/// Both inputs are orthonormalized first; the result is symmetric.
double subspace_distance(const Matrix& x, const Matrix& y);

/// Maximum absolute column sum.
double norm1(const Matrix& a);

}  // namespace rku
