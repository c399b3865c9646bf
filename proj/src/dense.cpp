#include "rku/dense.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rku {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::rank_deficient: return "RankDeficient";
    case ErrorCode::singular_shift: return "SingularShift";
    case ErrorCode::ill_conditioned_eigenbasis: return "IllConditionedEigenbasis";
    case ErrorCode::singularity_on_spectrum: return "SingularityOnSpectrum";
    case ErrorCode::support_overlaps_spectrum: return "SupportOverlapsSpectrum";
    case ErrorCode::pole_inside_domain: return "PoleInsideDomain";
    case ErrorCode::eta_not_contracting: return "EtaNotContracting";
    case ErrorCode::last_pole_not_infinite: return "LastPoleNotInfinite";
    case ErrorCode::indefinite_square_window: return "IndefiniteSquareWindow";
    case ErrorCode::compressed_not_solvable: return "CompressedNotSolvable";
    case ErrorCode::spectra_intersect: return "SpectraIntersect";
    case ErrorCode::denominator_zero: return "DenominatorZero";
    case ErrorCode::m_singular: return "MSingular";
    case ErrorCode::oracle_too_large: return "OracleTooLarge";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

void require_finite(const Matrix& a, const char* name) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " has non-finite entries");
  }
}

Matrix qr_orthonormalize(const Matrix& w) { return orthonormalize_against(Matrix(w.rows(), 0), w); }

Matrix orthonormalize_against(const Matrix& q, Matrix w) {
  if (q.rows() != w.rows() && q.cols() > 0) {
    throw Error(ErrorCode::invalid_argument, "orthonormalize_against: row mismatch");
  }
  const Index n = w.rows();
  const Index k0 = q.cols();
  const Index k = w.cols();
  if (k0 + k > n) {
    throw Error(ErrorCode::rank_deficient, "more columns than rows");
  }
  Matrix out(n, k0 + k);
  out.leftCols(k0) = q;
  for (Index j = 0; j < k; ++j) {
    Vector v = w.col(j);
    const double initial = v.norm();
    if (initial == 0.0) {
      std::ostringstream msg;
      msg << "column " << j << " is zero";
      throw Error(ErrorCode::rank_deficient, msg.str());
    }
    const Index done = k0 + j;
    for (int pass = 0; pass < 2; ++pass) {
      if (done == 0) break;
      const auto basis = out.leftCols(done);
      v -= basis * (basis.adjoint() * v);
    }
    const double remaining = v.norm();
    if (remaining < tol::deflate * initial) {
      std::ostringstream msg;
      msg << "column " << j << " lost " << remaining / initial << " of its norm";
      throw Error(ErrorCode::rank_deficient, msg.str());
    }
    out.col(done) = v / remaining;
  }
  return out.rightCols(k);
}

ShiftedFactorization::ShiftedFactorization(const Matrix& a, Scalar shift) : shift_(shift) {
  Matrix shifted = a;
  shifted.diagonal().array() -= shift;
  lu_.compute(shifted);
  const double scale = std::max(norm1(a), std::abs(shift));
  const auto& lu = lu_.matrixLU();
  for (Index i = 0; i < lu.rows(); ++i) {
    if (!(std::abs(lu(i, i)) >= tol::pivot * scale)) {
      std::ostringstream msg;
      msg << "pivot " << i << " of A - (" << shift.real() << "," << shift.imag() << ") I vanishes";
      throw Error(ErrorCode::singular_shift, msg.str());
    }
  }
}

Matrix ShiftedFactorization::solve(const Matrix& y) const { return lu_.solve(y); }

Matrix ShiftedFactorization::solve_adjoint(const Matrix& y) const { return lu_.adjoint().solve(y); }

ShiftedFactorization shifted_factorize(const Matrix& a, Scalar xi) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::invalid_argument, "shifted_factorize: A not square");
  return ShiftedFactorization(a, xi);
}

double eigenbasis_condition_cap() { return 1.0 / std::sqrt(std::numeric_limits<double>::epsilon()); }

SpectralDecomposition spectral_decompose(const Matrix& a, Structure s, bool allow_ill_conditioned) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::invalid_argument, "spectral_decompose: A not square");
  SpectralDecomposition out;
  if (a.rows() == 0) {
    out.transform = out.inverse_transform = Matrix(0, 0);
    return out;
  }
  if (s == Structure::hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::ill_conditioned_eigenbasis, "Hermitian eigensolver did not converge");
    }
    out.eigenvalues = es.eigenvalues().cast<Scalar>();
    out.transform = es.eigenvectors();
    out.inverse_transform = out.transform.adjoint();
    out.kind = SpectralDecomposition::Kind::hermitian_unitary;
    return out;
  }
  Eigen::ComplexEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::ill_conditioned_eigenbasis, "eigensolver did not converge");
  }
  out.eigenvalues = es.eigenvalues();
  out.transform = es.eigenvectors();
  out.kind = SpectralDecomposition::Kind::general_similarity;
  Eigen::JacobiSVD<Matrix> svd(out.transform);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (out.condition > eigenbasis_condition_cap()) {
    if (!allow_ill_conditioned) {
      std::ostringstream msg;
      msg << "eigenvector condition " << out.condition;
      throw Error(ErrorCode::ill_conditioned_eigenbasis, msg.str());
    }
    return out;
  }
  out.inverse_transform = out.transform.partialPivLu().inverse();
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return RealVector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Matrix s = a / scale;
  const Matrix gram = s.rows() <= s.cols() ? Matrix(s * s.adjoint()) : Matrix(s.adjoint() * s);
  const double top = hermitian_eigenvalues(gram).maxCoeff();
  return scale * std::sqrt(std::max(top, 0.0));
}

double subspace_distance(const Matrix& x, const Matrix& y) {
  const Matrix qx = x.householderQr().householderQ() * Matrix::Identity(x.rows(), x.cols());
  const Matrix qy = y.householderQr().householderQ() * Matrix::Identity(y.rows(), y.cols());
  const Matrix rx = qy - qx * (qx.adjoint() * qy);
  const Matrix ry = qx - qy * (qy.adjoint() * qx);
  return std::max(spectral_norm(rx), spectral_norm(ry));
}

double norm1(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace rku
