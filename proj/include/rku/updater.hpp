#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rku/arnoldi.hpp"
#include "rku/function.hpp"
#include "rku/funm.hpp"

namespace rku {

/// f(A + B C^*) - f(A). When `j` is set, C = B J^* with J Hermitian, so
/// D = B J B^* and a Hermitian A allows the single-basis shortcut.
struct UpdateProblem {
  Matrix a;
  Matrix b;
  Matrix c;
  std::optional<Matrix> j;
  Structure structure = Structure::general;

  static UpdateProblem low_rank(Matrix a, Matrix b, Matrix c, Structure s = Structure::general);
  static UpdateProblem hermitian(Matrix a, Matrix b, Matrix j);

  Matrix d() const { return b * c.adjoint(); }
};

struct UpdateOptions {
  Index m_max = 50;
  double tol = 1e-8;  ///< absolute, on the estimator; 0 runs all m_max steps
  Index d = 2;
  /// Dense f(A + D) - f(A); enables true errors in the report.
  std::optional<Matrix> reference;
  /// Use the single-basis path whenever the problem qualifies.
  bool allow_hermitian_shortcut = true;
  /// End the sweep with a report instead of throwing on rank deficiency.
  bool stop_on_breakdown = false;
};

struct UpdateState {
  KrylovBasis left;
  KrylovBasis right;  ///< equals left in Hermitian mode
  Matrix coupling;    ///< X_m(f)
  std::vector<Matrix> x_history;  ///< X_1, ..., X_m (empty matrix after a failed step)
  std::vector<double> estimate_history;
  bool hermitian_mode = false;

  /// U_m X_m V_m^*
  Matrix approximation() const;
};

struct UpdateReport {
  Index final_rank = 0;
  Index iterations = 0;
  std::vector<double> estimates;
  std::vector<double> true_errors;  ///< filled when a reference is supplied
  bool converged = false;
  bool stagnation_warning = false;
  /// The sweep hit a rank-deficient block and stopped early (only with
  /// UpdateOptions::stop_on_breakdown).
  bool breakdown = false;
  std::string message;
};

struct UpdateResult {
  UpdateState state;
  UpdateReport report;
};

/// X_m(f): the (1,2) block of f([[G, U^* D V], [0, H^* + V^* D V]]).
Matrix project_update(const KrylovBasis& left, const KrylovBasis& right, const Matrix& b, const Matrix& c,
                      const FunctionSpec& f);

/// X_m(f) = f(G + U^* B J B^* U) - f(G) for Hermitian G and J.
Matrix update_hermitian(const KrylovBasis& left, const Matrix& b, const Matrix& j, const FunctionSpec& f);

/// Spectral norm of X_m - [X_{m-d} 0; 0 0] for the newest step m; X_k = 0 for
/// k <= 0. Infinite when either iterate is missing.
double estimate_error(const UpdateState& state, Index d);

/// Padded difference of two nested iterates.
double padded_difference(const Matrix& newer, const Matrix& older);

/// Rational Krylov approximation of f(A + B C^*) - f(A), grown one pole at a time.
UpdateResult run_update(const UpdateProblem& problem, const FunctionSpec& f, const PolePlan& plan,
                        const UpdateOptions& options = {});

/// True when the problem and plan qualify for the single-basis path: Hermitian
/// A, Hermitian J and real finite poles.
bool hermitian_shortcut_applies(const UpdateProblem& problem, const PolePlan& plan);

/// Three consecutive estimate decreases of less than 5 percent.
bool detect_stagnation(const std::vector<double>& estimates);

}  // namespace rku
