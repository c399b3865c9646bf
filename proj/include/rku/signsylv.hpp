#pragma once

#include <optional>
#include <vector>

#include "rku/updater.hpp"

namespace rku {

/// sign(A + B J B^*) - sign(A) for Hermitian invertible A and Hermitian J.
/// The plan holds poles for A^2, real and negative or infinite.
struct SignUpdateInput {
  Matrix a;
  Matrix b;
  Matrix j;
  PolePlan plan;
};

struct SignUpdateOptions {
  Index m_max = 50;
  double tol = 1e-8;  ///< 0 runs all m_max steps
  Index d = 2;
  /// Dense sign(A + D) - sign(A) for true errors.
  std::optional<Matrix> reference;
  /// Also evaluate X_m through the block-triangular form and record the gap.
  bool check_block_form = false;
  bool stop_on_breakdown = false;
};

struct SignUpdateResult {
  /// update = left * right^*, with left = [(A + D) U X, B J] and right = [U, f_m].
  Matrix left;
  Matrix right;
  Matrix f_m;  ///< U G^{-1/2} U^* B
  Matrix x;    ///< X_m(z^{-1/2})
  KrylovBasis basis;
  UpdateReport report;
  /// Largest relative gap between the two X_m evaluations (check_block_form only).
  double block_form_gap = 0.0;

  Matrix update() const { return left * right.adjoint(); }
};

/// Rational Krylov update of the sign function through the inverse square root of
/// A^2, on spaces q_m(A^2)^{-1} K_m(A^2, [B, AB]).
SignUpdateResult sign_update(const SignUpdateInput& input, const SignUpdateOptions& options = {});

/// A1 Z - Z A2 + B1 C2^* = 0
struct SylvesterProblem {
  Matrix a1;
  Matrix a2;
  Matrix b1;
  Matrix c2;
};

struct SylvesterOptions {
  Index m_max = 50;
  double tol = 1e-10;  ///< relative change of the compressed solution; 0 runs all m_max steps
  Index d = 1;
  /// Record dense residual norms (desk scale only).
  bool track_residual = true;
};

struct SylvesterResult {
  /// Z_m = left * right^* with left = U Z~ and right = V.
  Matrix left;
  Matrix right;
  Matrix z_tilde;
  KrylovBasis u;
  KrylovBasis v;
  UpdateReport report;
  std::vector<double> residuals;  ///< |A1 Z_m - Z_m A2 + B1 C2^*|_2 per step
  std::vector<double> galerkin;   ///< |U^*(residual) V|_2 per step

  Matrix solution() const { return left * right.adjoint(); }
};

/// Galerkin projection onto q_m(A1)^{-1} K_m(A1, B1) and conj(q_m)(A2^*)^{-1} K_m(A2^*, C2).
SylvesterResult sylvester_solve_krylov(const SylvesterProblem& problem, const PolePlan& plan,
                                       const SylvesterOptions& options = {});

/// Dense Bartels-Stewart solve of A1 Z - Z A2 = F via complex Schur forms.
Matrix sylvester_dense(const Matrix& a1, const Matrix& a2, const Matrix& f);
/// Dense solution of the problem's equation.
Matrix sylvester_dense(const SylvesterProblem& problem);

}  // namespace rku
