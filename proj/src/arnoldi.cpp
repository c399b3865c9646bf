#include "rku/arnoldi.hpp"

#include <sstream>

namespace rku {

namespace {

// Orthonormal columns completing `q` inside range([q, w]) when w has more
// columns than the space has room for. Columns are taken greedily by largest
// remaining norm.
Matrix fill_remaining(const Matrix& q, Matrix w) {
  const Index n = w.rows();
  const Index room = n - q.cols();
  const double initial = w.colwise().norm().maxCoeff();
  for (int pass = 0; pass < 2; ++pass) {
    if (q.cols() > 0) w -= q * (q.adjoint() * w);
  }
  Matrix out(n, room);
  for (Index j = 0; j < room; ++j) {
    Index best = 0;
    const double norm = w.colwise().norm().maxCoeff(&best);
    if (!(norm >= tol::deflate * initial)) {
      throw Error(ErrorCode::rank_deficient, "block does not complete the space");
    }
    Vector v = w.col(best) / norm;
    for (Index k = 0; k < j; ++k) v -= out.col(k) * out.col(k).dot(v);
    v.normalize();
    out.col(j) = v;
    w -= v * (v.adjoint() * w);
  }
  return out;
}

void append_block(KrylovBasis& s, const Matrix& w, const Matrix& op_new) {
  const Index k = s.basis.cols();
  const Index add = op_new.cols();
  const Index n = s.basis.rows();
  Matrix basis(n, k + add);
  basis << s.basis, w;
  Matrix op_basis(n, k + add);
  op_basis << s.op_basis, op_new;

  Matrix g(k + add, k + add);
  g.topLeftCorner(k, k) = s.compression;
  g.topRightCorner(k, add) = s.basis.adjoint() * op_new;
  g.bottomLeftCorner(add, k) = w.adjoint() * s.op_basis;
  g.bottomRightCorner(add, add) = w.adjoint() * op_new;
  if (s.structure == Structure::hermitian) {
    g.bottomRightCorner(add, add) = (0.5 * (g.bottomRightCorner(add, add) + g.bottomRightCorner(add, add).adjoint())).eval();
    g.bottomLeftCorner(add, k) = g.topRightCorner(k, add).adjoint();
  }
  s.basis = std::move(basis);
  s.op_basis = std::move(op_basis);
  s.compression = std::move(g);
}

struct Sweep {
  const Matrix& op;
  ShiftCache* cache;

  Matrix apply(const KrylovBasis& s, const Matrix& x) const {
    return s.side == Side::direct ? Matrix(op * x) : Matrix(op.adjoint() * x);
  }

  Matrix solve(const KrylovBasis& s, Scalar xi, const Matrix& y) const {
    const ShiftedFactorization& f = cache->get(xi);
    return s.side == Side::direct ? f.solve(y) : f.solve_adjoint(y);
  }

  void step(KrylovBasis& s, const Pole& xi) const {
    const Index n = s.seed.rows();
    const Index j = s.steps();
    if (s.basis.cols() >= n) {
      s.poles_used.push_back(xi);
      s.block_ends.push_back(s.basis.cols());
      return;
    }
    Matrix w;
    if (j == 0) {
      w = xi.is_infinite() ? s.seed : solve(s, xi.value(), s.seed);
    } else {
      const Index start = j == 1 ? 0 : s.block_ends[std::size_t(j - 2)];
      const Matrix last = s.basis.middleCols(start, s.basis.cols() - start);
      w = xi.is_infinite() ? apply(s, last) : solve(s, xi.value(), last);
    }
    Matrix q;
    try {
      q = s.basis.cols() + w.cols() > n ? fill_remaining(s.basis, w) : orthonormalize_against(s.basis, w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::rank_deficient) throw;
      std::ostringstream msg;
      msg << "breakdown at step " << j + 1 << " (" << e.what() << ")";
      throw Error(ErrorCode::rank_deficient, msg.str());
    }
    append_block(s, q, apply(s, q));
    s.poles_used.push_back(xi);
    s.block_ends.push_back(s.basis.cols());
  }
};

KrylovBasis empty_state(const Matrix& op, Matrix seed, Side side, OperatorTag tag, Structure structure) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::invalid_argument, "operator is not square");
  if (seed.rows() != op.rows()) throw Error(ErrorCode::invalid_argument, "seed block has the wrong row count");
  if (seed.cols() == 0) throw Error(ErrorCode::invalid_argument, "seed block has no columns");
  require_finite(seed, "seed block");
  KrylovBasis s;
  const Index n = op.rows();
  s.basis = Matrix(n, 0);
  s.op_basis = Matrix(n, 0);
  s.compression = Matrix(0, 0);
  s.block_size = seed.cols();
  s.seed = std::move(seed);
  s.side = side;
  s.tag = tag;
  s.structure = structure;
  return s;
}

}  // namespace

const ShiftedFactorization& ShiftCache::get(Scalar xi) {
  for (const auto& [key, f] : entries_) {
    if (key == xi) return *f;
  }
  entries_.emplace_back(xi, std::make_unique<ShiftedFactorization>(*op_, xi));
  return *entries_.back().second;
}

Index KrylovBasis::dim_at(Index j) const {
  if (j < 0 || j > steps()) throw Error(ErrorCode::invalid_argument, "dim_at: step out of range");
  return j == 0 ? 0 : block_ends[std::size_t(j - 1)];
}

RationalArnoldi::RationalArnoldi(std::shared_ptr<const Matrix> op, Matrix seed, Side side, OperatorTag tag,
                                 Structure structure, std::shared_ptr<ShiftCache> cache)
    : op_(std::move(op)), cache_(std::move(cache)) {
  if (!op_) throw Error(ErrorCode::invalid_argument, "null operator");
  if (!cache_) cache_ = std::make_shared<ShiftCache>(op_);
  state_ = empty_state(*op_, std::move(seed), side, tag, structure);
}

void RationalArnoldi::step(const Pole& xi) { Sweep{*op_, cache_.get()}.step(state_, xi); }

void RationalArnoldi::run(const PolePlan& plan, Index m) {
  for (const Pole& p : plan.expand(m)) step(p);
}

KrylovBasis rational_arnoldi_step(const KrylovBasis& state, const Matrix& op, const Pole& xi) {
  auto shared = std::make_shared<const Matrix>(op);
  ShiftCache cache(shared);
  KrylovBasis next = state;
  Sweep{*shared, &cache}.step(next, xi);
  return next;
}

KrylovBasis build_basis(const Matrix& a, const Matrix& b, const PolePlan& plan, Index m, Structure structure) {
  RationalArnoldi sweep(std::make_shared<const Matrix>(a), b, Side::direct, OperatorTag::a, structure);
  sweep.run(plan, m);
  return sweep.state();
}

KrylovBasis adjoint_basis(const Matrix& a, const Matrix& c, const PolePlan& plan, Index m, Structure structure) {
  RationalArnoldi sweep(std::make_shared<const Matrix>(a), c, Side::adjoint, OperatorTag::a_adjoint, structure);
  sweep.run(plan, m);
  return sweep.state();
}

}  // namespace rku
