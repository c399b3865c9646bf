#include "rku/signsylv.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace rku {

SignUpdateResult sign_update(const SignUpdateInput& input, const SignUpdateOptions& options) {
  const Matrix& a = input.a;
  const Index n = a.rows();
  if (a.cols() != n || input.b.rows() != n || input.j.rows() != input.b.cols() || input.j.cols() != input.b.cols()) {
    throw Error(ErrorCode::invalid_argument, "sign_update: inconsistent shapes");
  }
  if (options.d < 1 || options.m_max < options.d) throw Error(ErrorCode::invalid_argument, "sign_update: need m_max >= d >= 1");
  for (const Pole& p : input.plan.base()) {
    if (!p.is_infinite() && (p.value().imag() != 0.0 || p.value().real() >= 0.0)) {
      throw Error(ErrorCode::invalid_argument, "sign_update: poles for A^2 must be negative real or infinite");
    }
  }

  SignUpdateResult result;
  UpdateReport& report = result.report;
  const Matrix& b = input.b;
  const Matrix& j = input.j;
  const Matrix a_plus_d = a + b * j * b.adjoint();
  const Matrix bj = b * j;

  if (b.cwiseAbs().maxCoeff() == 0.0 || j.cwiseAbs().maxCoeff() == 0.0) {
    result.left = Matrix::Zero(n, 1);
    result.right = Matrix::Zero(n, 1);
    result.f_m = Matrix::Zero(n, b.cols());
    report.iterations = 1;
    report.estimates = {0.0};
    if (options.reference) report.true_errors.push_back(spectral_norm(*options.reference));
    report.converged = 0.0 <= options.tol;
    return result;
  }

  const Index l = b.cols();
  Matrix w(n, 2 * l);
  w << b, a * b;
  Matrix jt = Matrix::Zero(2 * l, 2 * l);
  jt.topLeftCorner(l, l) = j * (b.adjoint() * b) * j;
  jt.topRightCorner(l, l) = j;
  jt.bottomLeftCorner(l, l) = j;
  const Matrix d_tilde_factor_b = w;  // D~ = W Jt W^*
  const Matrix d_tilde_factor_c = w * jt.adjoint();

  auto a_squared = std::make_shared<const Matrix>(a * a);
  RationalArnoldi sweep(a_squared, w, Side::direct, OperatorTag::a_squared, Structure::hermitian);
  const FunctionSpec inv_sqrt = FunctionSpec::inv_sqrt();
  const double norm_apd = spectral_norm(a_plus_d);
  const double norm_bj = spectral_norm(bj);

  std::vector<Matrix> xs;
  std::vector<Matrix> fs;
  for (Index m = 1; m <= options.m_max; ++m) {
    try {
      sweep.step(input.plan.at(m - 1));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::rank_deficient || !options.stop_on_breakdown || m == 1) throw;
      report.breakdown = true;
      report.message = e.what();
      break;
    }
    const KrylovBasis& s = sweep.state();
    const RealVector ritz = hermitian_eigenvalues(s.compression);
    if (!(ritz.minCoeff() > 0.0)) {
      throw Error(ErrorCode::indefinite_square_window, "compression of A^2 lost positivity at step " + std::to_string(m));
    }
    Matrix x = update_hermitian(s, w, jt, inv_sqrt);
    if (options.check_block_form) {
      const Matrix x_block = project_update(s, s, d_tilde_factor_b, d_tilde_factor_c, inv_sqrt);
      const double scale = std::max(spectral_norm(x), 1e-300);
      result.block_form_gap = std::max(result.block_form_gap, spectral_norm(x - x_block) / scale);
    }
    const Matrix g_inv_sqrt = funm_small(s.compression, inv_sqrt, Structure::hermitian);
    const Matrix f_m = s.basis * (g_inv_sqrt * (s.basis.adjoint() * b));

    xs.push_back(x);
    fs.push_back(f_m);
    double est;
    if (m - options.d <= 0) {
      est = norm_apd * spectral_norm(x) + norm_bj * spectral_norm(f_m);
    } else {
      const Matrix& x_old = xs[std::size_t(m - options.d - 1)];
      est = norm_apd * padded_difference(x, x_old) + norm_bj * spectral_norm(f_m - fs[std::size_t(m - options.d - 1)]);
    }
    report.estimates.push_back(est);
    report.iterations = m;

    result.x = x;
    result.f_m = f_m;
    result.left.resize(n, s.dim() + l);
    result.left << a_plus_d * (s.basis * x), bj;
    result.right.resize(n, s.dim() + l);
    result.right << s.basis, f_m;
    if (options.reference) {
      report.true_errors.push_back(spectral_norm(*options.reference - result.update()));
    }
    if (options.tol > 0.0 && est <= options.tol) {
      report.converged = true;
      break;
    }
  }
  result.basis = sweep.state();
  report.final_rank = result.left.cols();
  report.stagnation_warning = detect_stagnation(report.estimates);
  return result;
}

Matrix sylvester_dense(const Matrix& a1, const Matrix& a2, const Matrix& f) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols() || f.rows() != a1.rows() || f.cols() != a2.rows()) {
    throw Error(ErrorCode::invalid_argument, "sylvester_dense: inconsistent shapes");
  }
  const Index n1 = a1.rows();
  const Index n2 = a2.rows();
  if (n1 == 0 || n2 == 0) return Matrix::Zero(n1, n2);
  Eigen::ComplexSchur<Matrix> s1(a1);
  Eigen::ComplexSchur<Matrix> s2(a2);
  const Matrix& t1 = s1.matrixT();
  const Matrix& t2 = s2.matrixT();
  const Matrix& q1 = s1.matrixU();
  const Matrix& q2 = s2.matrixU();
  const double scale = std::max(norm1(a1) + norm1(a2), 1e-300);
  Matrix rhs = q1.adjoint() * f * q2;
  Matrix y(n1, n2);
  // T1 Y - Y T2 = F, column k: (T1 - T2(k,k) I) y_k = f_k + sum_{i<k} y_i T2(i,k)
  for (Index k = 0; k < n2; ++k) {
    Vector col = rhs.col(k);
    if (k > 0) col += y.leftCols(k) * t2.col(k).head(k);
    Matrix shifted = t1.triangularView<Eigen::Upper>();
    shifted.diagonal().array() -= t2(k, k);
    for (Index i = 0; i < n1; ++i) {
      if (std::abs(shifted(i, i)) <= tol::axis * scale) {
        throw Error(ErrorCode::spectra_intersect, "spectra of the two coefficients meet");
      }
    }
    y.col(k) = shifted.triangularView<Eigen::Upper>().solve(col);
  }
  return q1 * y * q2.adjoint();
}

Matrix sylvester_dense(const SylvesterProblem& p) {
  return sylvester_dense(p.a1, p.a2, -(p.b1 * p.c2.adjoint()));
}

SylvesterResult sylvester_solve_krylov(const SylvesterProblem& problem, const PolePlan& plan,
                                       const SylvesterOptions& options) {
  const Index n1 = problem.a1.rows();
  const Index n2 = problem.a2.rows();
  if (problem.a1.cols() != n1 || problem.a2.cols() != n2 || problem.b1.rows() != n1 || problem.c2.rows() != n2 ||
      problem.b1.cols() != problem.c2.cols()) {
    throw Error(ErrorCode::invalid_argument, "sylvester_solve_krylov: inconsistent shapes");
  }
  if (options.d < 1 || options.m_max < options.d) throw Error(ErrorCode::invalid_argument, "need m_max >= d >= 1");

  SylvesterResult result;
  UpdateReport& report = result.report;
  RationalArnoldi left(std::make_shared<const Matrix>(problem.a1), problem.b1, Side::direct);
  RationalArnoldi right(std::make_shared<const Matrix>(problem.a2), problem.c2, Side::adjoint, OperatorTag::a_adjoint);
  const Matrix rhs = problem.b1 * problem.c2.adjoint();

  std::vector<Matrix> history;
  for (Index m = 1; m <= options.m_max; ++m) {
    const Pole xi = plan.at(m - 1);
    left.step(xi);
    right.step(xi);
    const KrylovBasis& u = left.state();
    const KrylovBasis& v = right.state();
    const Matrix m12 = (u.basis.adjoint() * problem.b1) * (v.basis.adjoint() * problem.c2).adjoint();
    Matrix z;
    try {
      z = sylvester_dense(u.compression, v.compression.adjoint(), -m12);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::spectra_intersect) throw;
      throw Error(ErrorCode::compressed_not_solvable, "compressed spectra meet at step " + std::to_string(m));
    }
    history.push_back(z);
    const double norm_z = spectral_norm(z);
    double est;
    if (m - options.d <= 0) {
      est = norm_z > 0.0 ? 1.0 : 0.0;
    } else {
      const double diff = padded_difference(z, history[std::size_t(m - options.d - 1)]);
      est = norm_z > 0.0 ? diff / norm_z : 0.0;
    }
    report.estimates.push_back(est);
    report.iterations = m;
    result.z_tilde = z;
    result.left = u.basis * z;
    result.right = v.basis;
    if (options.track_residual) {
      const Matrix zm = result.solution();
      const Matrix residual = problem.a1 * zm - zm * problem.a2 + rhs;
      result.residuals.push_back(spectral_norm(residual));
      result.galerkin.push_back(spectral_norm(u.basis.adjoint() * residual * v.basis));
    }
    if (options.tol > 0.0 && est <= options.tol) {
      report.converged = true;
      break;
    }
  }
  result.u = left.state();
  result.v = right.state();
  report.final_rank = std::min(result.u.dim(), result.v.dim());
  return result;
}

}  // namespace rku
