#pragma once

// Generators and reference computations shared by the unit tests and the
// acceptance runner. Everything here is built directly on Eigen so that it
// stays independent of the library code under test.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rku/types.hpp"

namespace rku::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double normal() { return normal_(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }

  Matrix real(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Matrix complex(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = Scalar(normal(), normal());
    return m;
  }

  Matrix unitary(Index n) {
    Eigen::HouseholderQR<Matrix> qr(complex(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  /// Q diag(eigs) Q^* with a random unitary Q.
  Matrix hermitian_with(const std::vector<double>& eigs) {
    const Index n = Index(eigs.size());
    const Matrix q = unitary(n);
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = eigs[std::size_t(i)];
    Matrix a = q * d * q.adjoint();
    return (0.5 * (a + a.adjoint())).eval();
  }

  /// Eigenvalues uniform in [lo, hi].
  Matrix hermitian(Index n, double lo, double hi) {
    std::vector<double> e(static_cast<std::size_t>(n));
    for (auto& v : e) v = uniform(lo, hi);
    return hermitian_with(e);
  }

  /// Random matrix with eigenvalues in Re z in [lo, hi] and a moderately
  /// conditioned eigenbasis.
  Matrix stable(Index n, double lo, double hi) {
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = Scalar(uniform(lo, hi), uniform(-1.0, 1.0));
    const Matrix v = Matrix::Identity(n, n) + 0.3 * complex(n, n) / std::sqrt(double(n));
    return v * d * v.inverse();
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

inline double rel(const Matrix& x, const Matrix& ref) {
  const double scale = norm2(ref);
  return norm2(x - ref) / (scale > 0.0 ? scale : 1.0);
}

/// Orthonormal basis of range(W) from a Householder QR.
inline Matrix orth(const Matrix& w) {
  Eigen::HouseholderQR<Matrix> qr(w);
  return qr.householderQ() * Matrix::Identity(w.rows(), w.cols());
}

/// Sine of the largest principal angle between two subspaces of equal dimension.
inline double angle_sine(const Matrix& x, const Matrix& y) {
  const Matrix qx = orth(x);
  const Matrix qy = orth(y);
  return norm2(qy - qx * (qx.adjoint() * qy));
}

/// f(A) for Hermitian A through Eigen's self-adjoint solver.
inline Matrix herm_fun(const Matrix& a, const std::function<Scalar(double)>& f) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es((0.5 * (a + a.adjoint())).eval());
  Vector fl(a.rows());
  for (Index i = 0; i < a.rows(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

/// f(A) for diagonalizable A through Eigen's general eigensolver.
inline Matrix diag_fun(const Matrix& a, const std::function<Scalar(Scalar)>& f) {
  const Eigen::ComplexEigenSolver<Matrix> es(a);
  Vector fl(a.rows());
  for (Index i = 0; i < a.rows(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().inverse();
}

/// Columns of q(A)^{-1} [B, AB, ..., A^{m-1} B] where q collects the finite
/// poles among the first m; infinite poles are given as NaN.
inline Matrix explicit_rational_krylov(const Matrix& a, const Matrix& b, const std::vector<Scalar>& poles) {
  const Index n = a.rows();
  const Index l = b.cols();
  const Index m = Index(poles.size());
  Matrix k(n, m * l);
  Matrix block = b;
  for (Index j = 0; j < m; ++j) {
    k.middleCols(j * l, l) = block;
    block = a * block;
  }
  for (const Scalar& xi : poles) {
    if (std::isnan(xi.real())) continue;
    k = (a - xi * Matrix::Identity(n, n)).partialPivLu().solve(k);
  }
  return k;
}

/// A1 Z - Z A2 = F through the Kronecker form (I kron A1 - A2^T kron I) vec Z = vec F.
inline Matrix kron_sylvester(const Matrix& a1, const Matrix& a2, const Matrix& f) {
  const Index n1 = a1.rows();
  const Index n2 = a2.rows();
  Matrix big = Matrix::Zero(n1 * n2, n1 * n2);
  for (Index j = 0; j < n2; ++j) {
    big.block(j * n1, j * n1, n1, n1) += a1;
    for (Index k = 0; k < n2; ++k) {
      big.block(j * n1, k * n1, n1, n1) -= a2(k, j) * Matrix::Identity(n1, n1);
    }
  }
  const Vector vf = Eigen::Map<const Vector>(f.data(), f.size());
  const Vector vz = big.partialPivLu().solve(vf);
  return Eigen::Map<const Matrix>(vz.data(), n1, n2);
}

inline Vector unit(Index n, Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

inline Matrix diag(const std::vector<double>& d) {
  Matrix a = Matrix::Zero(Index(d.size()), Index(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) a(Index(i), Index(i)) = d[i];
  return a;
}

}  // namespace rku::testing
