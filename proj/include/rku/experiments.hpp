#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rku/bounds.hpp"
#include "rku/poles.hpp"
#include "rku/signsylv.hpp"
#include "rku/updater.hpp"

namespace rku {

/// splitmix64 stream with Box-Muller normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in (0, 1).
  double uniform();
  double normal();
  /// Real standard normal entries stored as complex numbers.
  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  /// Complex entries with independent standard normal parts.
  Matrix complex_normal_matrix(Index rows, Index cols);

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

/// Random vector with the given 2-norm.
Vector random_vector(Rng& rng, Index n, double norm);

/// Diagonal matrix with logarithmically spaced entries in [lo, hi].
Matrix logspace_diagonal(Index n, double lo, double hi);
/// Diagonal with `half` linearly spaced entries in [-hi, -lo] and in [lo, hi].
Matrix symmetric_gap_diagonal(Index half, double lo, double hi);

struct CurveRow {
  Index m = 0;
  Index dim = 0;  ///< subspace dimension after m steps (2m for the squared operator)
  double error_true = 0.0;
  double error_estimate = 0.0;
  std::optional<double> bound;
};

struct Curve {
  std::string label;
  std::vector<CurveRow> rows;
  bool converged = false;
  Index iterations = 0;
  double final_error = 0.0;
  bool breakdown = false;
  /// Scale used for relative errors (|f(A)| or |f(A+D) - f(A)|), when relevant.
  double reference_norm = 1.0;
};

/// Header `m,error_true,error_estimate,bound`; values in %.15e, empty bound
/// cells when no bound applies.
void write_csv(std::ostream& out, const Curve& curve);
/// `converged=<bool> iterations=<k> final_error=<v>`
std::string summary_line(const Curve& curve);

struct ExperimentSettings {
  Index n = 200;
  std::uint64_t seed = 1;
  Index m_max = 0;  ///< 0 picks the experiment default
  double tol = 0.0; ///< estimator tolerance; 0 runs to m_max
  Index d = 2;
};

/// Inverse square root update with a single repeated pole on log-spaced
/// eigenvalues in [1e-3, 1e3] and |b| = 100.
struct MarkovInstance {
  Matrix a;
  Vector b;
  SpectralWindow window;
  Matrix reference;  ///< f(A + bb^*) - f(A)
  double norm_fa = 0.0;
};
MarkovInstance make_markov_instance(Index n, std::uint64_t seed, const FunctionSpec& f);

Curve run_fig1(const ExperimentSettings& settings);
/// Ten quasi-optimal poles in Leja order, repeated cyclically.
Curve run_fig2(const ExperimentSettings& settings);

struct SignInstance {
  Matrix a;
  Vector b;
  Matrix reference;  ///< sign(A + bb^*) - sign(A)
  double gap_lo = 1e-2;
  double gap_hi = 1.0;
};
SignInstance make_sign_instance(Index n, std::uint64_t seed);

/// Sign update via the squared operator (label "alg4") or by direct
/// projection with sign poles (label "alg3"). `degree` counts distinct poles:
/// inverse square root poles in z = x^2 for alg4, conjugate sign poles in x
/// for alg3 (so degree 10 means five conjugate pairs there).
Curve run_sign_alg4(const SignInstance& inst, Index degree, const ExperimentSettings& settings);
Curve run_sign_alg3(const SignInstance& inst, Index degree, const ExperimentSettings& settings);

/// Update on user matrices. Poles come from `poles` (see parse_pole_strategy);
/// an empty string picks single-markov for Hermitian Markov problems and
/// polynomial otherwise. True errors need n <= oracle_max_order; the bound
/// column is filled for Hermitian problems with a Markov function.
Curve run_custom(const UpdateProblem& problem, const FunctionSpec& f, const std::string& poles,
                 const ExperimentSettings& settings);

/// Sylvester run with per-step residual and Galerkin norms.
struct SylvesterRun {
  SylvesterResult result;
  Curve curve;  ///< error_true holds the residual, bound is unused
};
SylvesterRun run_sylvester(const SylvesterProblem& problem, const std::string& poles,
                           const ExperimentSettings& settings);
/// Header `m,residual,galerkin,error_estimate`.
void write_sylvester_csv(std::ostream& out, const SylvesterResult& result);

/// First row whose error is at or below `threshold` (nullopt if never).
std::optional<CurveRow> first_crossing(const Curve& curve, double threshold);

/// exp of the least-squares slope of log(error) for rows with
/// error in [lo, hi] and m <= m_cap. Returns nullopt with fewer than 3 rows.
std::optional<double> fit_rate(const Curve& curve, double lo, double hi, Index m_cap);

/// Pole plan from a CLI strategy string or a pole file.
///   single-markov | quasi-optimal:N | zolotarev-sign:N | zolotarev-invsqrt:N
///   exp:M | extended | polynomial | file:<path> | <path>
/// Spectral information for the strategies comes from `window` (Markov
/// kinds) or the gap [gap_lo, gap_hi] (Zolotarev kinds).
struct PoleContext {
  std::optional<SpectralWindow> window;
  std::optional<MarkovSupport> support;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
};
PolePlan parse_pole_strategy(const std::string& spec, const PoleContext& context);

}  // namespace rku
