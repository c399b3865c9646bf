#pragma once

#include "rku/dense.hpp"
#include "rku/function.hpp"

namespace rku {

/// f(A) for a small dense matrix via its spectral decomposition. Hermitian
/// input uses the unitary path; general input is diagonalized, and exp falls
/// back to scaling and squaring when the eigenbasis is ill-conditioned.
Matrix funm_small(const Matrix& a, const FunctionSpec& f, Structure s = Structure::general);

/// f applied to an already computed decomposition.
Matrix funm_from_decomposition(const SpectralDecomposition& d, const FunctionSpec& f, double scale);

struct BlockTriangularFunction {
  Matrix f11;
  Matrix f12;
  Matrix f22;
};

/// Nonzero blocks of f([[A11, A12], [0, A22]]).
///
/// The diagonal blocks are funm_small of A11 and A22; the coupling block is
/// assembled from both eigenbases with the divided-difference matrix of f
/// (Daleckii-Krein form), so it stays accurate when the spectra of A11 and
/// A22 are close or interlace.
BlockTriangularFunction funm_block_triangular(const Matrix& a11, const Matrix& a12, const Matrix& a22,
                                              const FunctionSpec& f, Structure s11 = Structure::general,
                                              Structure s22 = Structure::general);

}  // namespace rku
