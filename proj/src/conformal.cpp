#include "rku/conformal.hpp"

#include <cmath>

#include "rku/dense.hpp"

namespace rku {

SpectralWindow SpectralWindow::interval(double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "window needs finite lambda_min <= lambda_max");
  }
  SpectralWindow w;
  w.lambda_min = lo;
  w.lambda_max = hi;
  w.omega = lo;
  return w;
}

SpectralWindow SpectralWindow::ellipse(double lo, double hi, double semi_minor) {
  SpectralWindow w = interval(lo, hi);
  if (!(semi_minor >= 0.0) || semi_minor >= 0.5 * (hi - lo)) {
    throw Error(ErrorCode::invalid_argument, "ellipse needs 0 <= semi_minor < semi_major");
  }
  w.kind = Kind::ellipse;
  w.semi_minor = semi_minor;
  return w;
}

SpectralWindow SpectralWindow::from_hermitian(const Matrix& a, const Matrix& a_plus_d) {
  const RealVector ea = hermitian_eigenvalues(a);
  const RealVector eb = hermitian_eigenvalues(a_plus_d);
  return interval(std::min(ea.minCoeff(), eb.minCoeff()), std::max(ea.maxCoeff(), eb.maxCoeff()));
}

ConformalMap::ConformalMap(const SpectralWindow& window) : window_(window) {
  c_ = 0.5 * (window.lambda_min + window.lambda_max);
  const double a = 0.5 * (window.lambda_max - window.lambda_min);
  if (window.kind == SpectralWindow::Kind::interval) {
    delta_ = a;
    rho_ = 1.0;
  } else {
    const double b = window.semi_minor;
    delta_ = std::sqrt((a - b) * (a + b));
    rho_ = (a + b) / delta_;
  }
  if (!(delta_ > 0.0)) throw Error(ErrorCode::invalid_argument, "conformal map needs a window of positive width");
}

Scalar ConformalMap::psi(Scalar u) const {
  const Scalar v = rho_ * u;
  return c_ + 0.5 * delta_ * (v + 1.0 / v);
}

Scalar ConformalMap::phi(Scalar z) const {
  const Scalar y = (z - c_) / delta_;
  Scalar v = y + std::sqrt(y - 1.0) * std::sqrt(y + 1.0);
  return v / rho_;
}

double ConformalMap::phi_real(double x) const {
  if (x >= window_.lambda_min) throw Error(ErrorCode::invalid_argument, "phi_real: point not left of the window");
  // Distances to the foci are formed directly; (y - 1)(y + 1) cancels when x is close to the window.
  const double lo = window_.kind == SpectralWindow::Kind::interval ? window_.lambda_min : c_ - delta_;
  const double hi = window_.kind == SpectralWindow::Kind::interval ? window_.lambda_max : c_ + delta_;
  return ((x - c_) - std::sqrt((lo - x) * (hi - x))) / (delta_ * rho_);
}

double ConformalMap::psi_real(double u) const {
  if (u >= 0.0) return psi(Scalar(u, 0.0)).real();
  // c + delta (v + 1/v) / 2 = (c - delta) + delta (v + 1)^2 / (2 v), exact near v = -1.
  const double v = rho_ * u;
  const double lo = window_.kind == SpectralWindow::Kind::interval ? window_.lambda_min : c_ - delta_;
  return lo + 0.5 * delta_ * (v + 1.0) * (v + 1.0) / v;
}

}  // namespace rku
