#include "rku/updater.hpp"

#include <cmath>
#include <limits>

namespace rku {

namespace {

bool is_zero(const Matrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

bool is_hermitian(const Matrix& m) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

}  // namespace

UpdateProblem UpdateProblem::low_rank(Matrix a, Matrix b, Matrix c, Structure s) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || c.rows() != a.rows() || b.cols() != c.cols()) {
    throw Error(ErrorCode::invalid_argument, "update problem: inconsistent shapes");
  }
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
  UpdateProblem p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.c = std::move(c);
  p.structure = s;
  return p;
}

UpdateProblem UpdateProblem::hermitian(Matrix a, Matrix b, Matrix j) {
  if (j.rows() != b.cols() || j.cols() != b.cols()) {
    throw Error(ErrorCode::invalid_argument, "update problem: J must be l x l");
  }
  if (!is_hermitian(j)) throw Error(ErrorCode::invalid_argument, "update problem: J is not Hermitian");
  Matrix c = b * j.adjoint();
  UpdateProblem p = low_rank(std::move(a), std::move(b), std::move(c), Structure::hermitian);
  p.j = std::move(j);
  return p;
}

Matrix UpdateState::approximation() const { return left.basis * coupling * right.basis.adjoint(); }

Matrix project_update(const KrylovBasis& left, const KrylovBasis& right, const Matrix& b, const Matrix& c,
                      const FunctionSpec& f) {
  const Matrix ub = left.basis.adjoint() * b;
  const Matrix vb = right.basis.adjoint() * b;
  const Matrix vc = right.basis.adjoint() * c;
  const Matrix a12 = ub * vc.adjoint();
  const Matrix a22 = right.compression.adjoint() + vb * vc.adjoint();
  return funm_block_triangular(left.compression, a12, a22, f, left.structure, Structure::general).f12;
}

Matrix update_hermitian(const KrylovBasis& left, const Matrix& b, const Matrix& j, const FunctionSpec& f) {
  const Matrix ub = left.basis.adjoint() * b;
  Matrix perturbed = left.compression + ub * j * ub.adjoint();
  perturbed = (0.5 * (perturbed + perturbed.adjoint())).eval();
  return funm_small(perturbed, f, Structure::hermitian) - funm_small(left.compression, f, Structure::hermitian);
}

double padded_difference(const Matrix& newer, const Matrix& older) {
  if (older.rows() > newer.rows() || older.cols() > newer.cols()) {
    throw Error(ErrorCode::invalid_argument, "padded_difference: older iterate is larger");
  }
  Matrix diff = newer;
  diff.topLeftCorner(older.rows(), older.cols()) -= older;
  return diff.size() == 0 ? 0.0 : spectral_norm(diff);
}

double estimate_error(const UpdateState& state, Index d) {
  if (d < 1) throw Error(ErrorCode::invalid_argument, "estimate_error: d must be positive");
  const Index m = Index(state.x_history.size());
  if (m == 0) return std::numeric_limits<double>::infinity();
  const Matrix& newer = state.x_history.back();
  if (newer.size() == 0) return std::numeric_limits<double>::infinity();
  if (m - d <= 0) return spectral_norm(newer);
  const Matrix& older = state.x_history[std::size_t(m - d - 1)];
  const Index rows = state.left.dim_at(m - d);
  const Index cols = state.right.dim_at(m - d);
  if (older.rows() != rows || older.cols() != cols) return std::numeric_limits<double>::infinity();
  return padded_difference(newer, older);
}

bool hermitian_shortcut_applies(const UpdateProblem& problem, const PolePlan& plan) {
  if (problem.structure != Structure::hermitian || !problem.j) return false;
  for (const Pole& p : plan.base()) {
    if (!p.is_infinite() && p.value().imag() != 0.0) return false;
  }
  return true;
}

bool detect_stagnation(const std::vector<double>& estimates) {
  int run = 0;
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    const double prev = estimates[i - 1];
    const double cur = estimates[i];
    const bool slow = std::isfinite(prev) && std::isfinite(cur) && prev > 0.0 && cur <= prev && cur > 0.95 * prev;
    run = slow ? run + 1 : 0;
    if (run >= 3) return true;
  }
  return false;
}

UpdateResult run_update(const UpdateProblem& problem, const FunctionSpec& f, const PolePlan& plan,
                        const UpdateOptions& options) {
  if (options.d < 1 || options.m_max < options.d) {
    throw Error(ErrorCode::invalid_argument, "run_update: need m_max >= d >= 1");
  }
  if (plan.capacity() >= 0 && plan.capacity() < options.m_max) {
    throw Error(ErrorCode::invalid_argument, "run_update: pole plan shorter than m_max");
  }
  const Index n = problem.a.rows();
  if (options.reference && (options.reference->rows() != n || options.reference->cols() != n)) {
    throw Error(ErrorCode::invalid_argument, "run_update: reference has the wrong shape");
  }

  UpdateResult result;
  UpdateState& state = result.state;
  UpdateReport& report = result.report;

  if (is_zero(problem.b) || is_zero(problem.c)) {
    state.left.basis = Matrix(n, 0);
    state.right.basis = Matrix(n, 0);
    state.coupling = Matrix(0, 0);
    state.x_history.push_back(state.coupling);
    state.estimate_history.push_back(0.0);
    report.iterations = 1;
    report.estimates = {0.0};
    if (options.reference) report.true_errors.push_back(spectral_norm(*options.reference));
    report.converged = 0.0 <= options.tol;
    return result;
  }

  state.hermitian_mode = options.allow_hermitian_shortcut && hermitian_shortcut_applies(problem, plan);
  auto op = std::make_shared<const Matrix>(problem.a);
  auto cache = std::make_shared<ShiftCache>(op);
  const Structure left_structure =
      problem.structure == Structure::hermitian ? Structure::hermitian : Structure::general;
  RationalArnoldi left(op, problem.b, Side::direct, OperatorTag::a, left_structure, cache);
  std::optional<RationalArnoldi> right;
  if (!state.hermitian_mode) {
    right.emplace(op, problem.c, Side::adjoint, OperatorTag::a_adjoint, left_structure, cache);
  }

  bool previous_failed = false;
  for (Index m = 1; m <= options.m_max; ++m) {
    const Pole xi = plan.at(m - 1);
    try {
      left.step(xi);
      if (right) right->step(xi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::rank_deficient || !options.stop_on_breakdown || m == 1) throw;
      report.breakdown = true;
      report.message = e.what();
      break;
    }
    state.left = left.state();
    state.right = right ? right->state() : left.state();

    Matrix x;
    try {
      x = state.hermitian_mode ? update_hermitian(state.left, problem.b, *problem.j, f)
                               : project_update(state.left, state.right, problem.b, problem.c, f);
      previous_failed = false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singularity_on_spectrum && e.code() != ErrorCode::ill_conditioned_eigenbasis) throw;
      if (previous_failed) {
        if (!options.stop_on_breakdown) throw;
        report.breakdown = true;
        report.message = e.what();
        state.x_history.push_back(Matrix());
        state.estimate_history.push_back(std::numeric_limits<double>::infinity());
        break;
      }
      previous_failed = true;
    }
    state.x_history.push_back(x);
    if (x.size() > 0) state.coupling = x;

    const double est = x.size() > 0 ? estimate_error(state, options.d) : std::numeric_limits<double>::infinity();
    state.estimate_history.push_back(est);
    report.estimates.push_back(est);
    report.iterations = m;
    if (options.reference) {
      if (x.size() > 0) {
        report.true_errors.push_back(spectral_norm(*options.reference - state.approximation()));
      } else {
        report.true_errors.push_back(std::numeric_limits<double>::infinity());
      }
    }
    if (options.tol > 0.0 && est <= options.tol) {
      report.converged = true;
      break;
    }
  }
  if (state.x_history.back().size() == 0 && state.coupling.size() > 0) {
    // Last step failed: fall back to the newest successful iterate, padded.
    Matrix padded = Matrix::Zero(state.left.dim(), state.right.dim());
    padded.topLeftCorner(state.coupling.rows(), state.coupling.cols()) = state.coupling;
    state.coupling = padded;
  }
  report.final_rank = std::min(state.left.dim(), state.right.dim());
  report.stagnation_warning = detect_stagnation(report.estimates);
  return result;
}

}  // namespace rku
