#include "rku/funm.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace rku {

namespace {

double matrix_scale(const Matrix& a) { return std::max(norm1(a), 1e-300); }

void require_square(const Matrix& a, const char* name) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::invalid_argument, std::string(name) + " is not square");
}

Vector apply_to_eigenvalues(const Vector& lambda, const FunctionSpec& f, double scale) {
  Vector out(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    f.require_defined(lambda(i), scale);
    out(i) = f.value(lambda(i));
  }
  return out;
}

}  // namespace

Matrix funm_from_decomposition(const SpectralDecomposition& d, const FunctionSpec& f, double scale) {
  const Vector fl = apply_to_eigenvalues(d.eigenvalues, f, scale);
  return d.transform * fl.asDiagonal() * d.inverse_transform;
}

Matrix funm_small(const Matrix& a, const FunctionSpec& f, Structure s) {
  require_square(a, "funm_small: A");
  require_finite(a, "funm_small: A");
  if (a.rows() == 0) return Matrix(0, 0);
  const double scale = matrix_scale(a);
  if (s == Structure::hermitian) {
    return funm_from_decomposition(spectral_decompose(a, s), f, scale);
  }
  const bool has_fallback = f.kind() == FunctionSpec::Kind::exp;
  SpectralDecomposition d = spectral_decompose(a, s, has_fallback);
  if (d.condition > eigenbasis_condition_cap()) {
    return a.exp();
  }
  return funm_from_decomposition(d, f, scale);
}

BlockTriangularFunction funm_block_triangular(const Matrix& a11, const Matrix& a12, const Matrix& a22,
                                              const FunctionSpec& f, Structure s11, Structure s22) {
  require_square(a11, "funm_block_triangular: A11");
  require_square(a22, "funm_block_triangular: A22");
  if (a12.rows() != a11.rows() || a12.cols() != a22.rows()) {
    throw Error(ErrorCode::invalid_argument, "funm_block_triangular: A12 has the wrong shape");
  }
  const bool has_fallback = f.kind() == FunctionSpec::Kind::exp;
  const SpectralDecomposition d1 = spectral_decompose(a11, s11, has_fallback);
  const SpectralDecomposition d2 = spectral_decompose(a22, s22, has_fallback);
  const double cap = eigenbasis_condition_cap();

  if (d1.condition > cap || d2.condition > cap) {
    const Index n1 = a11.rows(), n2 = a22.rows();
    Matrix big = Matrix::Zero(n1 + n2, n1 + n2);
    big.topLeftCorner(n1, n1) = a11;
    big.topRightCorner(n1, n2) = a12;
    big.bottomRightCorner(n2, n2) = a22;
    const Matrix fb = big.exp();
    return {fb.topLeftCorner(n1, n1), fb.topRightCorner(n1, n2), fb.bottomRightCorner(n2, n2)};
  }

  const double scale1 = matrix_scale(a11);
  const double scale2 = matrix_scale(a22);
  BlockTriangularFunction out;
  out.f11 = funm_from_decomposition(d1, f, scale1);
  out.f22 = funm_from_decomposition(d2, f, scale2);

  // F12 = V1 (Delta o (V1^{-1} A12 V2)) V2^{-1}, Delta_ij = f[lambda_i, mu_j]
  Matrix core = d1.inverse_transform * a12 * d2.transform;
  for (Index j = 0; j < core.cols(); ++j) {
    for (Index i = 0; i < core.rows(); ++i) {
      core(i, j) *= f.divided_difference(d1.eigenvalues(i), d2.eigenvalues(j));
    }
  }
  out.f12 = d1.transform * core * d2.inverse_transform;
  return out;
}

}  // namespace rku
