#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rku/bounds.hpp"
#include "rku/elliptic.hpp"
#include "rku/oracle.hpp"
#include "rku/poles.hpp"
#include "rku/updater.hpp"
#include "support.hpp"

using namespace rku;
using namespace rku::testing;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Exterior map of [lo, hi] evaluated on the real axis left of the interval.
double phi_left(double x, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double d = 0.5 * (hi - lo);
  const double t = (x - c) / d;
  return t - std::sqrt(t * t - 1.0);
}

double psi(double u, double lo, double hi) {
  return 0.5 * (lo + hi) + 0.25 * (hi - lo) * (u + 1.0 / u);
}

// Pole and rate from the sigma / y_opt / w chain with finite alpha.
std::pair<double, double> single_pole_oracle(double lo, double hi, double alpha, double beta) {
  const double pa = phi_left(alpha, lo, hi);
  const double pb = phi_left(beta, lo, hi);
  const double sigma = (pb - pa) / (pb * pa - 1.0);
  const double y = -1.0 / sigma - std::sqrt(1.0 / (sigma * sigma) - 1.0);
  const double w = (1.0 + pa * y) / (pa + y);
  return {psi(w, lo, hi), 1.0 / std::abs(y)};
}

double complete_k_series(double k) {
  // K(k) = pi/2 sum ((2n)! / (4^n n!^2))^2 k^{2n}
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    const double ratio = double(2 * n - 1) / double(2 * n);
    term *= ratio * ratio * k * k;
    sum += term;
  }
  return 0.5 * pi * sum;
}

std::vector<double> real_values(const std::vector<Pole>& poles) {
  std::vector<double> v;
  for (const Pole& p : poles) v.push_back(p.value().real());
  return v;
}

}  // namespace

TEST_SUITE("poles") {
  TEST_CASE("elliptic: AGM, complete integrals and Jacobi identities") {
    CHECK(agm(1.0, std::sqrt(2.0)) == doctest::Approx(1.19814023473559220744).epsilon(1e-15));
    for (double k : {0.01, 0.1, 0.3, 0.5}) {
      const EllipticParameters ep(k);
      CHECK(std::abs(ep.K() - complete_k_series(k)) <= 1e-12);
      CHECK(std::abs(ep.sn(0.0)) <= 1e-15);
      CHECK(std::abs(ep.sn(ep.K()) - 1.0) <= 1e-12);
      for (double u : {0.1, 0.7, 1.3}) {
        const JacobiValues v = ep.jacobi(u);
        CHECK(std::abs(v.sn * v.sn + v.cn * v.cn - 1.0) <= 1e-13);
        CHECK(std::abs(v.dn * v.dn + k * k * v.sn * v.sn - 1.0) <= 1e-13);
      }
    }
    const EllipticParameters tiny(1e-9);
    CHECK(std::abs(tiny.sn(0.4) - std::sin(0.4)) <= 1e-13);
    // K(k) ~ log(4 / k') as k' -> 0
    const EllipticParameters near_one = EllipticParameters::from_complement(1e-8);
    CHECK(std::abs(near_one.K() - std::log(4.0 / 1e-8)) <= 1e-10);
    CHECK(std::abs(near_one.Kp() - 0.5 * pi) <= 1e-12);
    CHECK(std::abs(near_one.sn(near_one.K()) - 1.0) <= 1e-12);
  }

  TEST_CASE("interval map: round trips and normalization") {
    const SpectralWindow w = SpectralWindow::interval(1e-3, 1.0078e4);
    const ConformalMap map(w);
    Gen g(61);
    for (int i = 0; i < 50; ++i) {
      const double r = g.uniform(1.1, 50.0);
      const double t = g.uniform(0.0, 2.0 * pi);
      const Scalar u = std::polar(r, t);
      CHECK(std::abs(map.phi(map.psi(u)) - u) <= 1e-12 * std::abs(u));
      const Scalar z(g.uniform(-2e4, 2e4), g.uniform(-1e4, 1e4));
      if (std::abs(z.imag()) > 1.0) {
        CHECK(std::abs(map.psi(map.phi(z)) - z) <= 1e-12 * std::abs(z));
        CHECK(std::abs(map.phi(z)) > 1.0);
      }
    }
    CHECK(std::abs(map.phi_real(-1.0) - phi_left(-1.0, 1e-3, 1.0078e4)) <= 1e-12);
    CHECK(map.phi_real(0.0) < -1.0);
    const Scalar far(1e9, 0.0);
    CHECK(std::abs((map.psi(far) - map.center()) / far - 0.25 * (1.0078e4 - 1e-3)) <= 1e-9);

    const ConformalMap e(SpectralWindow::ellipse(1.0, 3.0, 0.5));
    for (int i = 0; i < 20; ++i) {
      const Scalar u = std::polar(g.uniform(1.1, 10.0), g.uniform(0.0, 2.0 * pi));
      CHECK(std::abs(e.phi(e.psi(u)) - u) <= 1e-12 * std::abs(u));
    }
    // the unit circle lands on the ellipse boundary
    const Scalar top = e.psi(Scalar(0.0, 1.0));
    CHECK(std::abs(top - Scalar(2.0, 0.5)) <= 1e-12);
  }

  TEST_CASE("single Markov pole: closed form and the 1e-3..1.0078e4 instance") {
    const SinglePole p = markov_single_pole(SpectralWindow::interval(1e-3, 1.0078e4), MarkovSupport{neg_inf, 0.0});
    CHECK(p.pole.value().imag() == 0.0);
    CHECK(std::abs(p.pole.value().real() + std::sqrt(1.0078e4 * 1e-3)) <= 1e-10 * std::sqrt(10.078));
    CHECK(std::abs(p.pole.value().real() + 3.1746) <= 5e-5);
    const double q = std::pow(1.0078e7, 0.25);
    CHECK(std::abs(p.rate - (q - 1.0) / (q + 1.0)) <= 1e-12);
    CHECK(std::abs(p.rate - 0.9651) <= 5e-5);

    const SinglePole flat = markov_single_pole(SpectralWindow::interval(1.0, 1.0), MarkovSupport{neg_inf, 0.0});
    CHECK(std::abs(flat.pole.value() - Scalar(-1.0)) <= 1e-12);
  }

  TEST_CASE("single Markov pole: finite alpha and the limit") {
    for (auto [lo, hi, alpha, beta] : std::vector<std::array<double, 4>>{
             {1.0, 10.0, -5.0, 0.0}, {0.5, 2.0, -1.0, -0.2}, {1e-2, 1e2, -3.0, -1.0}}) {
      const auto [pole, rate] = single_pole_oracle(lo, hi, alpha, beta);
      const SinglePole p = markov_single_pole(SpectralWindow::interval(lo, hi), MarkovSupport{alpha, beta});
      CHECK(std::abs(p.pole.value().real() - pole) <= 1e-10 * std::abs(pole));
      CHECK(std::abs(p.rate - rate) <= 1e-10);
    }
    const SinglePole far = markov_single_pole(SpectralWindow::interval(1.0, 100.0), MarkovSupport{-1e12, 0.0});
    const SinglePole lim = markov_single_pole(SpectralWindow::interval(1.0, 100.0), MarkovSupport{neg_inf, 0.0});
    CHECK(std::abs(far.pole.value().real() - lim.pole.value().real()) <= 1e-4);
  }

  TEST_CASE("single Markov pole: support overlapping the window") {
    try {
      markov_single_pole(SpectralWindow::interval(1.0, 2.0), MarkovSupport{neg_inf, 1.5});
      FAIL("expected support_overlaps_spectrum");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::support_overlaps_spectrum);
    }
  }

  TEST_CASE("quasi-optimal poles: bound, symmetry and consistency") {
    const double lo = 1e-3;
    const double hi = 1.0078e4;
    const SpectralWindow w = SpectralWindow::interval(lo, hi);
    const MarkovSupport s{neg_inf, 0.0};
    const ConformalMap map(w);
    for (Index m = 2; m <= 16; ++m) {
      const PolePlan plan = quasi_optimal_poles(w, s, m);
      REQUIRE(plan.base().size() == std::size_t(m));
      const double eta = eta_blaschke(plan.base(), map, s);
      CHECK(eta <= 1.05 * 2.0 * std::exp(-double(m) * pi * pi / std::log(16.0 * hi / lo)));
      std::vector<double> v = real_values(plan.base());
      std::sort(v.begin(), v.end());
      CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
      CHECK(v.back() < 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(std::abs(std::log(v[i] * v[v.size() - 1 - i] / (lo * hi))) <= 1e-8);
      }
    }
    const double single = markov_single_pole(w, s).pole.value().real();
    const double one = quasi_optimal_poles(w, s, 1).base()[0].value().real();
    CHECK(std::abs(one - single) <= 0.1 * std::abs(single));
    CHECK(quasi_optimal_rate_bound(lo, hi, 10) ==
          doctest::Approx(2.0 * std::exp(-10.0 * pi * pi / std::log(16.0 * 1.0078e7))).epsilon(1e-14));
  }

  TEST_CASE("quasi-optimal poles: cyclic repetition") {
    const double lo = 1e-3;
    const double hi = 1e4;
    const SpectralWindow w = SpectralWindow::interval(lo, hi);
    const MarkovSupport s{neg_inf, 0.0};
    const ConformalMap map(w);
    const PolePlan base = quasi_optimal_poles(w, s, 6);
    const PolePlan cyc(base.base(), PolePlan::Repetition::cyclic);
    for (Index k = 1; k <= 4; ++k) {
      const double eta = eta_blaschke(cyc, 6 * k, map, s);
      CHECK(eta <= std::pow(2.0, double(k)) * std::exp(-double(6 * k) * pi * pi / std::log(16.0 * hi / lo)));
    }
  }

  TEST_CASE("Zolotarev sign: degree one and conjugate closure") {
    const ZolotarevSign z(1.0, 1.0, 1);
    const auto p = z.sign_poles();
    REQUIRE(p.size() == 2);
    CHECK(std::abs(p[0].value().real()) <= 1e-15);
    CHECK(std::abs(std::abs(p[0].value().imag()) - 1.0) <= 1e-12);
    CHECK(p[1].value() == std::conj(p[0].value()));
    CHECK(zolotarev_sign_poles(1e-2, 1.0, 10).conjugate_closed());
    CHECK(zolotarev_sign_poles(1e-2, 1.0, 10).base().size() == 20);
    CHECK_THROWS_AS(ZolotarevSign(0.0, 1.0, 2), Error);
    CHECK_THROWS_AS(ZolotarevSign(2.0, 1.0, 2), Error);
  }

  TEST_CASE("Zolotarev sign: degree 10 accuracy and equioscillation") {
    const double a = 1e-2;
    const ZolotarevSign z(a, 1.0, 10);
    double worst = 0.0;
    std::vector<double> err;
    const int samples = 10000;
    for (int s = 0; s <= samples; ++s) {
      const double x = a * std::pow(1.0 / a, double(s) / samples);
      err.push_back(1.0 - z.value(x));
      worst = std::max(worst, std::abs(err.back()));
      CHECK(std::abs(z.value(-x) + z.value(x)) <= 1e-15);
    }
    CHECK(worst < 1e-6);
    // alternating extrema of nearly equal size
    int alternations = 0;
    double last_sign = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
      const bool peak = (i == 0 || std::abs(err[i]) >= std::abs(err[i - 1])) &&
                        (i + 1 == err.size() || std::abs(err[i]) >= std::abs(err[i + 1]));
      if (peak && std::abs(err[i]) >= 0.99 * worst) {
        const double sg = err[i] > 0.0 ? 1.0 : -1.0;
        if (sg != last_sign) ++alternations;
        last_sign = sg;
      }
    }
    CHECK(alternations >= 2 * 10 + 1);
  }

  TEST_CASE("Zolotarev sign: poles are the poles of the approximant") {
    const double a = 0.05;
    const ZolotarevSign z(a, 2.0, 4);
    const auto poles = z.sign_poles();
    std::vector<double> s2;
    for (std::size_t i = 0; i < poles.size(); i += 2) s2.push_back(std::norm(poles[i].value()));
    // Z(x) = sum_j rho_j x / (x^2 + s_j^2): fit rho by least squares and check the fit.
    const int samples = 400;
    Eigen::MatrixXd m(samples, Index(s2.size()));
    Eigen::VectorXd rhs(samples);
    for (int i = 0; i < samples; ++i) {
      const double x = a * std::pow(2.0 / a, double(i) / (samples - 1));
      for (std::size_t j = 0; j < s2.size(); ++j) m(i, Index(j)) = x / (x * x + s2[j]);
      rhs(i) = z.value(x);
    }
    const Eigen::VectorXd rho = m.colPivHouseholderQr().solve(rhs);
    CHECK((m * rho - rhs).cwiseAbs().maxCoeff() <= 1e-10);

    const auto inv = z.inv_sqrt_poles();
    REQUIRE(inv.size() == s2.size());
    for (std::size_t j = 0; j < s2.size(); ++j) CHECK(std::abs(inv[j].value() + s2[j]) <= 1e-12 * s2[j]);
  }

  TEST_CASE("simple plans") {
    const auto one = exp_single_pole(1).expand(1);
    CHECK(std::abs(one[0].value() - Scalar(1.0 / std::sqrt(2.0))) <= 1e-15);
    const PolePlan ten = exp_single_pole(10);
    CHECK(ten.capacity() == 10);
    for (const Pole& p : ten.expand(10)) CHECK(std::abs(p.value().real() - 7.0710678118654752) <= 1e-14);
    CHECK(extended_plan(1).expand(1)[0] == Pole::finite(0.0));
    const auto ext = extended_plan(4).expand(4);
    CHECK(ext[0] == Pole::finite(0.0));
    CHECK(ext[1].is_infinite());
    CHECK(ext[2] == Pole::finite(0.0));
    CHECK(ext[3].is_infinite());
    const auto poly = polynomial_plan(3).expand(3);
    CHECK(std::all_of(poly.begin(), poly.end(), [](const Pole& p) { return p.is_infinite(); }));
    const auto single = leja_sequence({Pole::finite(-2.0)});
    CHECK(single.size() == 1);
  }

  TEST_CASE("exp single pole: observed per-step decay") {
    Gen g(62);
    const Index n = 120;
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) a(i, i) = -50.0 * double(i) / double(n - 1);
    const Matrix b = g.real(n, 1) / std::sqrt(double(n));
    const Matrix d = b * b.adjoint();
    const Matrix ref = dense_update(a, d, FunctionSpec::exp(), Structure::hermitian);
    std::vector<double> errs;
    for (Index m = 4; m <= 14; m += 2) {
      UpdateOptions opt;
      opt.m_max = m;
      opt.tol = 0.0;
      opt.d = 1;
      const UpdateResult r = run_update(UpdateProblem::hermitian(a, b, Matrix::Ones(1, 1)), FunctionSpec::exp(),
                                        exp_single_pole(m), opt);
      errs.push_back(norm2(ref - r.state.approximation()));
    }
    const double rate = std::pow(errs.back() / errs.front(), 1.0 / 10.0);
    CHECK(rate <= 0.55);
  }

  TEST_CASE("extended plan: inverse square root rate") {
    const Index n = 150;
    const double lo = 1e-2;
    const double hi = 1e2;
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) a(i, i) = lo * std::pow(hi / lo, double(i) / double(n - 1));
    Gen g(63);
    const Matrix b = g.real(n, 1) / std::sqrt(double(n));
    const Matrix d = b * b.adjoint();
    UpdateOptions opt;
    opt.m_max = 40;
    opt.tol = 0.0;
    opt.reference = dense_update(a, d, FunctionSpec::inv_sqrt(), Structure::hermitian);
    const UpdateResult r = run_update(UpdateProblem::hermitian(a, b, Matrix::Ones(1, 1)), FunctionSpec::inv_sqrt(),
                                      extended_plan(40), opt);
    const SpectralWindow w = SpectralWindow::from_hermitian(a, a + d);
    const double q = std::pow(w.lambda_max / w.lambda_min, 0.25);
    const double predicted = (q - 1.0) / (q + 1.0);
    const auto& e = r.report.true_errors;
    const double observed = std::pow(e[29] / e[9], 1.0 / 20.0);
    CHECK(observed <= 1.1 * predicted);
  }
}
