#pragma once

#include <vector>

#include "rku/function.hpp"
#include "rku/funm.hpp"

namespace rku {

/// Dense reference routines refuse inputs larger than this order.
inline constexpr Index oracle_max_order = 512;

/// f(A + D) - f(A) by two dense matrix functions.
Matrix dense_update(const Matrix& a, const Matrix& d, const FunctionSpec& f, Structure s = Structure::general);

/// dense_update for real symmetric A and D with the eigendecompositions done in
/// extended precision. Used as the reference when f(A + D) is ill conditioned
/// at double precision (large ||D|| against small eigenvalues).
Matrix dense_update_extended(const Matrix& a, const Matrix& d, const FunctionSpec& f);

/// -A^{-1} b c^* A^{-1} / (1 + c^* A^{-1} b)
Matrix sherman_morrison(const Matrix& a, const Vector& b, const Vector& c);

/// Coefficients of r = p / q (ascending) with their m x m Hankel matrices,
/// m = max(deg p, deg q), H(alpha)(i, j) = alpha_{i+j+1} (zero past deg p).
struct HankelCoefficients {
  std::vector<Scalar> alpha;
  std::vector<Scalar> beta;
  Matrix h_alpha;
  Matrix h_beta;

  static HankelCoefficients from(std::vector<Scalar> alpha, std::vector<Scalar> beta);
  Index order() const noexcept { return h_alpha.rows(); }
};

struct BvlFactors {
  Matrix x;
  Matrix y;
  /// 2-norm condition number of the Krylov matrix K_m.
  double krylov_condition = 1.0;

  Matrix product() const { return x * y.adjoint(); }
};

/// Rank-one rational update r(A + b c^*) - r(A) = X Y^* from the
/// non-orthogonal Krylov bases K_m and L_m. Raises m_singular when
/// M = I + Y_beta^* X is singular.
BvlFactors bvl_update(const Matrix& a, const Vector& b, const Vector& c, const HankelCoefficients& coeffs);

/// constant I + sum residue (A - pole I)^{-power}
Matrix rational_eval_pf(const Matrix& a, const std::vector<PartialFractionTerm>& terms, Scalar constant);

}  // namespace rku
