#include <doctest.h>

#include <cmath>

#include "rku/oracle.hpp"
#include "rku/updater.hpp"
#include "support.hpp"

using namespace rku;
using namespace rku::testing;

namespace {

// Ascending coefficients of prod (z - roots).
std::vector<Scalar> poly_from_roots(const std::vector<Scalar>& roots) {
  std::vector<Scalar> c{1.0};
  for (const Scalar& r : roots) {
    std::vector<Scalar> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = next;
  }
  return c;
}

Scalar horner(const std::vector<Scalar>& c, Scalar z) {
  Scalar v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("dense update: zero, identity and the block-triangular identity") {
    Gen g(91);
    const Matrix a = g.stable(12, 1.0, 2.0);
    CHECK(norm2(dense_update(a, Matrix::Zero(12, 12), FunctionSpec::exp())) == 0.0);
    const Matrix d = g.complex(12, 1) * g.complex(12, 1).adjoint();
    CHECK(norm2(dense_update(a, d, FunctionSpec::polynomial({0.0, 1.0})) - d) <= 1e-11 * norm2(d));

    // [[A + D, D], [0, A]] = S diag(A + D, A) S^{-1} with S = [[I, -I], [0, I]], so F12 = f(A + D) - f(A).
    const Matrix b = g.complex(12, 1);
    const Matrix c = g.complex(12, 1);
    const Matrix dd = b * c.adjoint();
    const auto blocks = funm_block_triangular(a + dd, dd, a, FunctionSpec::exp());
    CHECK(rel(blocks.f12, dense_update(a, dd, FunctionSpec::exp())) <= 1e-10);
    CHECK_THROWS_AS(dense_update(Matrix::Zero(600, 600), Matrix::Zero(600, 600), FunctionSpec::exp()), Error);
  }

  TEST_CASE("extended-precision reference agrees with double precision on easy input") {
    Gen g(92);
    const Matrix a = g.hermitian(30, 1.0, 4.0).real().cast<Scalar>();
    Matrix sym = 0.5 * (a + a.transpose());
    const Matrix b = g.real(30, 1);
    const Matrix d = b * b.transpose();
    const Matrix x = dense_update_extended(sym, d, FunctionSpec::inv_sqrt());
    const Matrix y = dense_update(sym, d, FunctionSpec::inv_sqrt(), Structure::hermitian);
    CHECK(rel(x, y) <= 1e-12);
    CHECK_THROWS_AS(dense_update_extended(g.complex(4, 4), Matrix::Zero(4, 4), FunctionSpec::exp()), Error);
  }

  TEST_CASE("Sherman-Morrison") {
    CHECK(norm2(sherman_morrison(identity(3), Vector::Zero(3), unit(3, 1))) == 0.0);
    const Matrix e = sherman_morrison(identity(3), unit(3, 0), unit(3, 0));
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = -0.5;
    CHECK(norm2(e - expected) <= 1e-16);
    Gen g(93);
    const Matrix a = g.stable(20, 1.0, 3.0);
    const Vector b = g.complex(20, 1);
    const Vector c = g.complex(20, 1);
    CHECK(rel(sherman_morrison(a, b, c), dense_update(a, b * c.adjoint(), FunctionSpec::inverse())) <= 1e-12);
    try {
      sherman_morrison(identity(2), unit(2, 0), -unit(2, 0));
      FAIL("expected denominator_zero");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::denominator_zero);
    }
  }

  TEST_CASE("Hankel coefficient structure") {
    const HankelCoefficients h = HankelCoefficients::from({1.0, 2.0, 3.0, 4.0}, {5.0, 6.0, 7.0});
    REQUIRE(h.order() == 3);
    CHECK(h.h_alpha(0, 0) == Scalar(2.0));
    CHECK(h.h_beta(0, 0) == Scalar(6.0));
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        const Index k = i + j + 1;
        CHECK(h.h_alpha(i, j) == (k <= 3 ? Scalar(double(k + 1)) : Scalar(0.0)));
        CHECK(h.h_beta(i, j) == (k <= 2 ? Scalar(double(k + 5)) : Scalar(0.0)));
        if (i + 1 < 3 && j > 0) CHECK(h.h_alpha(i + 1, j - 1) == h.h_alpha(i, j));
      }
    }
  }

  TEST_CASE("BvL update: reduces to Sherman-Morrison and vanishes for constants") {
    Gen g(94);
    const Matrix a = g.stable(15, 1.0, 3.0);
    const Vector b = g.complex(15, 1);
    const Vector c = g.complex(15, 1);
    // r(z) = 1 / z: alpha = (1), beta = (0, 1)
    const BvlFactors f = bvl_update(a, b, c, HankelCoefficients::from({1.0}, {0.0, 1.0}));
    CHECK(rel(f.product(), sherman_morrison(a, b, c)) <= 1e-12);
    const BvlFactors k = bvl_update(a, b, c, HankelCoefficients::from({2.5}, {1.0}));
    CHECK(norm2(k.product()) <= 1e-14);
  }

  TEST_CASE("BvL update: random degree-4 rational against the dense oracle") {
    Gen g(95);
    for (int trial = 0; trial < 4; ++trial) {
      const Index n = 25;
      const Matrix a = g.stable(n, 1.0, 2.0);
      const Vector b = g.complex(n, 1) / std::sqrt(double(n));
      const Vector c = g.complex(n, 1) / std::sqrt(double(n));
      std::vector<Scalar> roots;
      for (int i = 0; i < 4; ++i) roots.push_back(Scalar(-g.uniform(0.5, 3.0), g.uniform(-1.0, 1.0)));
      const std::vector<Scalar> beta = poly_from_roots(roots);
      std::vector<Scalar> alpha;
      for (int i = 0; i < 4; ++i) alpha.push_back(Scalar(g.normal(), g.normal()));
      const BvlFactors f = bvl_update(a, b, c, HankelCoefficients::from(alpha, beta));
      const FunctionSpec r = FunctionSpec::rational(RationalFunction::from_coefficients(alpha, beta));
      const Matrix ref = dense_update(a, b * c.adjoint(), r);
      CHECK(rel(f.product(), ref) <= 1e-8);
      CHECK(f.krylov_condition >= 1.0);
      CHECK(f.x.cols() == 4);
    }
  }

  TEST_CASE("run_update, BvL and the dense oracle agree on exact rationals") {
    Gen g(96);
    for (int trial = 0; trial < 4; ++trial) {
      const Index n = 20;
      const Matrix a = g.stable(n, 1.0, 2.0);
      const Vector b = g.complex(n, 1) / std::sqrt(double(n));
      const Vector c = g.complex(n, 1) / std::sqrt(double(n));
      std::vector<Scalar> roots;
      std::vector<Pole> poles;
      for (int i = 0; i < 3; ++i) {
        roots.push_back(Scalar(-g.uniform(0.5, 3.0), 0.0));
        poles.push_back(Pole::finite(roots.back()));
      }
      const std::vector<Scalar> beta = poly_from_roots(roots);
      const std::vector<Scalar> alpha{g.normal(), g.normal(), g.normal()};
      const FunctionSpec r = FunctionSpec::rational(RationalFunction::from_coefficients(alpha, beta));
      const Matrix dense = dense_update(a, b * c.adjoint(), r);
      const Matrix bvl = bvl_update(a, b, c, HankelCoefficients::from(alpha, beta)).product();
      UpdateOptions opt;
      opt.m_max = 3;
      opt.tol = 0.0;
      opt.d = 1;
      const Matrix krylov = run_update(UpdateProblem::low_rank(a, b, c), r, PolePlan(poles), opt).state.approximation();
      CHECK(rel(bvl, dense) <= 1e-8);
      CHECK(rel(krylov, dense) <= 1e-8);
      CHECK(rel(krylov, bvl) <= 1e-8);
    }
  }

  TEST_CASE("partial-fraction evaluation") {
    Gen g(97);
    const Matrix a = g.stable(6, 1.0, 2.0);
    CHECK(norm2(rational_eval_pf(a, {}, 2.0) - 2.0 * identity(6)) == 0.0);
    const Scalar xi(-1.0, 0.5);
    const Matrix single = rational_eval_pf(a, {{xi, 1, 3.0}}, 0.0);
    CHECK(rel(single, 3.0 * (a - xi * identity(6)).inverse()) <= 1e-13);

    // (z^2 + 1) / ((z + 1)^2 (z + 3)) = -1.5/(z + 1) + 1/(z + 1)^2 + 2.5/(z + 3), checked by Horner per entry
    const std::vector<double> diag_entries{0.5, 1.0, 2.0, 4.0};
    const Matrix pf = rational_eval_pf(diag(diag_entries), {{-1.0, 1, -1.5}, {-1.0, 2, 1.0}, {-3.0, 1, 2.5}}, 0.0);
    const std::vector<Scalar> den = poly_from_roots({-1.0, -1.0, -3.0});
    for (std::size_t i = 0; i < diag_entries.size(); ++i) {
      const Scalar z = diag_entries[i];
      const Scalar exact = horner({1.0, 0.0, 1.0}, z) / horner(den, z);
      CHECK(std::abs(pf(Index(i), Index(i)) - exact) <= 1e-11);
    }
    CHECK_THROWS_AS(RationalFunction::from_coefficients({1.0}, den), Error);
    try {
      rational_eval_pf(diag({1.0, 2.0}), {{Scalar(2.0), 1, 1.0}}, 0.0);
      FAIL("expected singular_shift");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::singular_shift);
    }
  }
}
