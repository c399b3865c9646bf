#include "rku/poles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rku/elliptic.hpp"

namespace rku {

namespace {

void require_separated(const SpectralWindow& window, const MarkovSupport& support) {
  if (window.kind != SpectralWindow::Kind::interval) {
    throw Error(ErrorCode::invalid_argument, "pole construction needs an interval window");
  }
  if (!(support.beta < window.lambda_min)) {
    throw Error(ErrorCode::support_overlaps_spectrum, "Markov support reaches the spectral window");
  }
  if (!(support.alpha <= support.beta)) throw Error(ErrorCode::invalid_argument, "support needs alpha <= beta");
}

}  // namespace

SinglePole markov_single_pole(const SpectralWindow& window, const MarkovSupport& support) {
  require_separated(window, support);
  if (support.alpha == support.beta) return {Pole::finite(support.beta), 0.0};
  if (window.lambda_min == window.lambda_max && std::isinf(support.alpha)) {
    // Limit of the general formula as the window shrinks to a point.
    return {Pole::finite(2.0 * support.beta - window.lambda_min), 0.0};
  }
  const double width = 1e-8 * std::max(std::abs(window.lambda_min), 1.0);
  const SpectralWindow w = window.lambda_min == window.lambda_max
                               ? SpectralWindow::interval(window.lambda_min, window.lambda_min + width)
                               : window;
  const ConformalMap map(w);
  const double pb = map.phi_real(support.beta);
  double y;
  double wpt;
  if (std::isinf(support.alpha)) {
    y = pb - std::sqrt((pb - 1.0) * (pb + 1.0));
    wpt = y;
  } else {
    const double pa = map.phi_real(support.alpha);
    const double sigma = (pb - pa) / (pb * pa - 1.0);
    y = -1.0 / sigma - std::sqrt(1.0 / (sigma * sigma) - 1.0);
    wpt = (1.0 + pa * y) / (pa + y);
  }
  return {Pole::finite(map.psi_real(wpt)), 1.0 / std::abs(y)};
}

PolePlan quasi_optimal_poles(const SpectralWindow& window, const MarkovSupport& support, Index m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "quasi_optimal_poles: m must be positive");
  require_separated(window, support);
  if (window.lambda_min == window.lambda_max) {
    return PolePlan(std::vector<Pole>(std::size_t(m), markov_single_pole(window, support).pole));
  }
  const ConformalMap map(window);
  auto to_w = [](double x) {  // x = phi(z) < -1  ->  w in (0, 1)
    const double s = 1.0 / x;
    return (1.0 + s) / (1.0 - s);
  };
  const double w_lo = to_w(map.phi_real(support.beta));
  const double w_hi = std::isinf(support.alpha) ? 1.0 : to_w(map.phi_real(support.alpha));
  const EllipticParameters ep = EllipticParameters::from_complement(std::min(w_lo / w_hi, 1.0));
  std::vector<Pole> poles;
  for (Index j = 1; j <= m; ++j) {
    const double p = w_hi * ep.dn(double(2 * j - 1) * ep.K() / double(2 * m));
    const double t = (p - 1.0) / (p + 1.0);
    poles.push_back(Pole::finite(map.psi_real(1.0 / t)));
  }
  std::sort(poles.begin(), poles.end(), [](const Pole& x, const Pole& y) { return x.value().real() < y.value().real(); });
  return PolePlan(std::move(poles));
}

double quasi_optimal_rate_bound(double lambda_min, double lambda_max, Index m) {
  return 2.0 * std::exp(-double(m) * std::numbers::pi * std::numbers::pi / std::log(16.0 * lambda_max / lambda_min));
}

ZolotarevSign::ZolotarevSign(double a, double b, Index r) : a_(a), b_(b), r_(r) {
  if (!(a > 0.0 && a <= b) || !std::isfinite(b)) throw Error(ErrorCode::invalid_argument, "Zolotarev gap needs 0 < a <= b");
  if (r < 1) throw Error(ErrorCode::invalid_argument, "Zolotarev degree must be positive");
  const double kappa = a / b;
  const EllipticParameters ep = EllipticParameters::from_complement(kappa);
  for (Index i = 1; i <= 2 * r - 1; ++i) {
    const JacobiValues v = ep.jacobi(double(i) * ep.K() / double(2 * r));
    c_.push_back(kappa * kappa * (v.sn * v.sn) / (v.cn * v.cn));
  }
  // Equioscillation about 1 on [kappa, 1]: scale by 2 / (max + min).
  double lo = unscaled(1.0);
  double hi = lo;
  const Index samples = 20000;
  for (Index s = 0; s <= samples; ++s) {
    const double x = kappa * std::pow(1.0 / kappa, double(s) / double(samples));
    const double v = unscaled(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  scale_ = 2.0 / (lo + hi);
}

double ZolotarevSign::unscaled(double x) const {
  const double x2 = x * x;
  double value = x;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i % 2 == 0) {
      value /= x2 + c_[i];
    } else {
      value *= x2 + c_[i];
    }
  }
  return value;
}

double ZolotarevSign::value(double x) const { return scale_ * unscaled(x / b_); }

double ZolotarevSign::max_error(Index samples) const {
  double err = 0.0;
  for (Index s = 0; s <= samples; ++s) {
    const double x = a_ * std::pow(b_ / a_, double(s) / double(samples));
    err = std::max(err, std::abs(1.0 - value(x)));
  }
  return err;
}

std::vector<Pole> ZolotarevSign::sign_poles() const {
  std::vector<Pole> out;
  for (Index j = 0; j < r_; ++j) {
    const double im = b_ * std::sqrt(c_[std::size_t(2 * j)]);
    out.push_back(Pole::finite({0.0, im}));
    out.push_back(Pole::finite({0.0, -im}));
  }
  return out;
}

std::vector<Pole> ZolotarevSign::inv_sqrt_poles() const {
  std::vector<Pole> out;
  for (Index j = 0; j < r_; ++j) out.push_back(Pole::finite(-b_ * b_ * c_[std::size_t(2 * j)]));
  return out;
}

PolePlan zolotarev_sign_poles(double a, double b, Index degree) {
  return PolePlan(ZolotarevSign(a, b, degree).sign_poles());
}

PolePlan zolotarev_inv_sqrt_poles(double a, double b, Index degree) {
  return PolePlan(ZolotarevSign(a, b, degree).inv_sqrt_poles());
}

PolePlan exp_single_pole(Index m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "exp_single_pole: m must be positive");
  return PolePlan(std::vector<Pole>(std::size_t(m), Pole::finite(double(m) / std::numbers::sqrt2)));
}

PolePlan extended_plan(Index m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "extended_plan: m must be positive");
  std::vector<Pole> poles;
  for (Index j = 0; j < m; ++j) poles.push_back(j % 2 == 0 ? Pole::finite(0.0) : Pole::infinity());
  return PolePlan(std::move(poles));
}

PolePlan polynomial_plan(Index m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "polynomial_plan: m must be positive");
  return PolePlan(std::vector<Pole>(std::size_t(m), Pole::infinity()));
}

}  // namespace rku
