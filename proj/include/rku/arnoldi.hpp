#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rku/dense.hpp"
#include "rku/pole.hpp"

namespace rku {

/// Operator that a basis compresses.
enum class OperatorTag { a, a_adjoint, a_squared };

/// direct: spaces q(Op)^{-1} K(Op, B).
/// adjoint: spaces conj(q)(Op^*)^{-1} K(Op^*, C), built from factorizations of Op - xi I.
enum class Side { direct, adjoint };

/// Factorizations of Op - xi I keyed by xi, shared by direct and adjoint sweeps.
class ShiftCache {
 public:
  explicit ShiftCache(std::shared_ptr<const Matrix> op) : op_(std::move(op)) {}

  const ShiftedFactorization& get(Scalar xi);
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::shared_ptr<const Matrix> op_;
  std::vector<std::pair<Scalar, std::unique_ptr<ShiftedFactorization>>> entries_;
};

/// Orthonormal block basis of a rational Krylov space and its compression.
struct KrylovBasis {
  Matrix basis;        ///< n x k, orthonormal columns
  Matrix compression;  ///< basis^* Op_side basis
  Matrix op_basis;     ///< Op_side * basis, kept to extend the compression
  Matrix seed;         ///< B (direct) or C (adjoint)
  Index block_size = 0;
  std::vector<Pole> poles_used;
  OperatorTag tag = OperatorTag::a;
  Side side = Side::direct;
  Structure structure = Structure::general;

  Index steps() const noexcept { return Index(poles_used.size()); }
  Index dim() const noexcept { return basis.cols(); }
  /// Column count after j steps (j <= steps()).
  Index dim_at(Index j) const;

  std::vector<Index> block_ends;  ///< dim_at(j) for j = 1..steps()
};

/// Incremental block rational Arnoldi sweep on a dense operator.
///
/// Step 1 uses W = (Op - xi_1 I)^{-1} B for a finite pole and W = B for an
/// infinite one. Step j > 1 continues from the last block:
/// W = (Op - xi_j I)^{-1} U_{j-1} or W = Op U_{j-1}. Once the basis spans the
/// whole space further steps only record the pole.
class RationalArnoldi {
 public:
  RationalArnoldi(std::shared_ptr<const Matrix> op, Matrix seed, Side side = Side::direct,
                  OperatorTag tag = OperatorTag::a, Structure structure = Structure::general,
                  std::shared_ptr<ShiftCache> cache = nullptr);

  /// Appends one block for pole xi (the pole of q, not of conj(q)).
  void step(const Pole& xi);
  void run(const PolePlan& plan, Index m);

  const KrylovBasis& state() const noexcept { return state_; }
  const Matrix& op() const noexcept { return *op_; }
  const std::shared_ptr<ShiftCache>& cache() const noexcept { return cache_; }

 private:
  std::shared_ptr<const Matrix> op_;
  std::shared_ptr<ShiftCache> cache_;
  KrylovBasis state_;
};

/// One step of the sweep on an existing state.
KrylovBasis rational_arnoldi_step(const KrylovBasis& state, const Matrix& op, const Pole& xi);

/// Basis of q_m(A)^{-1} K_m(A, B) for the first m poles of the plan.
KrylovBasis build_basis(const Matrix& a, const Matrix& b, const PolePlan& plan, Index m,
                        Structure structure = Structure::general);

/// Basis of conj(q_m)(A^*)^{-1} K_m(A^*, C); compression is V^* A^* V.
KrylovBasis adjoint_basis(const Matrix& a, const Matrix& c, const PolePlan& plan, Index m,
                          Structure structure = Structure::general);

}  // namespace rku
