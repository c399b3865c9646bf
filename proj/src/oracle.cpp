#include "rku/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rku {

namespace {

void guard(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::invalid_argument, std::string(who) + ": matrix is not square");
  if (a.rows() > oracle_max_order) {
    throw Error(ErrorCode::oracle_too_large, std::string(who) + ": order " + std::to_string(a.rows()) + " exceeds " +
                                                 std::to_string(oracle_max_order));
  }
}

Matrix polyval(const Matrix& a, const std::vector<Scalar>& coeffs) {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    out = (a * out).eval();
    out.diagonal().array() += *it;
  }
  return out;
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

Index degree(const std::vector<Scalar>& c) {
  Index d = Index(c.size()) - 1;
  while (d > 0 && c[std::size_t(d)] == Scalar(0.0)) --d;
  return std::max<Index>(d, 0);
}

Matrix hankel(const std::vector<Scalar>& c, Index m) {
  Matrix h = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      const std::size_t k = std::size_t(i + j + 1);
      if (k < c.size()) h(i, j) = c[k];
    }
  }
  return h;
}

}  // namespace

Matrix dense_update(const Matrix& a, const Matrix& d, const FunctionSpec& f, Structure s) {
  guard(a, "dense_update");
  if (d.rows() != a.rows() || d.cols() != a.cols()) throw Error(ErrorCode::invalid_argument, "dense_update: D has the wrong shape");
  Matrix apd = a + d;
  if (s == Structure::hermitian) apd = (0.5 * (apd + apd.adjoint())).eval();
  return funm_small(apd, f, s) - funm_small(a, f, s);
}

namespace {

using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

ExtendedMatrix real_symmetric_part(const Matrix& m, const char* what) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0 || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw Error(ErrorCode::invalid_argument, std::string("dense_update_extended: ") + what + " is not real symmetric");
  }
  const ExtendedMatrix r = m.real().cast<long double>();
  return (r + r.transpose()) / 2.0L;
}

ExtendedMatrix funm_extended(const ExtendedMatrix& m, const FunctionSpec& f) {
  const Eigen::SelfAdjointEigenSolver<ExtendedMatrix> es(m);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::invalid_argument, "extended eigensolver did not converge");
  const long double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300L);
  const Index n = m.rows();
  Matrix fl = Matrix::Zero(n, 1);
  for (Index i = 0; i < n; ++i) {
    const Scalar z(double(es.eigenvalues()(i)), 0.0);
    f.require_defined(z, double(scale));
    fl(i) = f.value(z);
  }
  if (fl.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorCode::invalid_argument, "dense_update_extended: f is not real on the spectrum");
  }
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> d = fl.real().cast<long double>();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Matrix dense_update_extended(const Matrix& a, const Matrix& d, const FunctionSpec& f) {
  guard(a, "dense_update_extended");
  if (d.rows() != a.rows() || d.cols() != a.cols()) {
    throw Error(ErrorCode::invalid_argument, "dense_update_extended: D has the wrong shape");
  }
  const ExtendedMatrix ae = real_symmetric_part(a, "A");
  const ExtendedMatrix de = real_symmetric_part(d, "D");
  const ExtendedMatrix diff = funm_extended(ae + de, f) - funm_extended(ae, f);
  return diff.cast<double>().cast<Scalar>();
}

Matrix sherman_morrison(const Matrix& a, const Vector& b, const Vector& c) {
  guard(a, "sherman_morrison");
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Vector ainv_b = lu.solve(b);
  const Vector ainv_adj_c = lu.adjoint().solve(c);  // (c^* A^{-1})^*
  const Scalar denom = 1.0 + c.dot(ainv_b);
  if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(c.dot(ainv_b)))) {
    throw Error(ErrorCode::denominator_zero, "1 + c^* A^{-1} b vanishes");
  }
  return -(ainv_b * ainv_adj_c.adjoint()) / denom;
}

HankelCoefficients HankelCoefficients::from(std::vector<Scalar> alpha, std::vector<Scalar> beta) {
  if (alpha.empty() || beta.empty()) throw Error(ErrorCode::invalid_argument, "Hankel coefficients need p and q");
  const Index m = std::max(degree(alpha), degree(beta));
  HankelCoefficients h;
  h.h_alpha = hankel(alpha, m);
  h.h_beta = hankel(beta, m);
  h.alpha = std::move(alpha);
  h.beta = std::move(beta);
  return h;
}

BvlFactors bvl_update(const Matrix& a, const Vector& b, const Vector& c, const HankelCoefficients& coeffs) {
  guard(a, "bvl_update");
  const Index n = a.rows();
  const Index m = coeffs.order();
  BvlFactors out;
  if (m == 0) {
    out.x = Matrix::Zero(n, 1);
    out.y = Matrix::Zero(n, 1);
    return out;
  }
  Matrix k(n, m);
  Matrix l(n, m);
  const Matrix a_adj_mod = a.adjoint() + c * b.adjoint();
  k.col(0) = b;
  l.col(0) = c;
  for (Index j = 1; j < m; ++j) {
    k.col(j) = a * k.col(j - 1);
    l.col(j) = a_adj_mod * l.col(j - 1);
  }
  out.krylov_condition = condition_number(k);

  const Matrix q = polyval(a, coeffs.beta);
  const Eigen::PartialPivLU<Matrix> q_lu(q);
  const Matrix r = q_lu.solve(polyval(a, coeffs.alpha));
  out.x = q_lu.solve(k);
  const Matrix y_alpha = l * coeffs.h_alpha.adjoint();
  const Matrix y_beta = l * coeffs.h_beta.adjoint();
  const Matrix mm = Matrix::Identity(m, m) + y_beta.adjoint() * out.x;
  const Eigen::PartialPivLU<Matrix> m_lu(mm);
  const double scale = std::max(norm1(mm), 1.0);
  const Matrix& lu = m_lu.matrixLU();
  for (Index i = 0; i < m; ++i) {
    if (!(std::abs(lu(i, i)) > 1e-14 * scale)) throw Error(ErrorCode::m_singular, "I + Y_beta^* X is singular");
  }
  const Matrix y_adj = y_alpha.adjoint() - m_lu.solve(y_beta.adjoint() * (r + out.x * y_alpha.adjoint()));
  out.y = y_adj.adjoint();
  return out;
}

Matrix rational_eval_pf(const Matrix& a, const std::vector<PartialFractionTerm>& terms, Scalar constant) {
  guard(a, "rational_eval_pf");
  Matrix out = constant * Matrix::Identity(a.rows(), a.cols());
  for (const PartialFractionTerm& t : terms) {
    if (t.power < 1) throw Error(ErrorCode::invalid_argument, "rational_eval_pf: power must be positive");
    const ShiftedFactorization f = shifted_factorize(a, t.pole);
    Matrix p = Matrix::Identity(a.rows(), a.cols());
    for (int k = 0; k < t.power; ++k) p = f.solve(p);
    out += t.residue * p;
  }
  return out;
}

}  // namespace rku
