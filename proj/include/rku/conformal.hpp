#pragma once

#include "rku/types.hpp"

namespace rku {

/// Surrogate set E containing the relevant spectra or numerical ranges.
///
/// interval: E = [lambda_min, lambda_max].
/// ellipse: axis-symmetric ellipse centred on the real axis with real
/// semi-axis (lambda_max - lambda_min)/2 and imaginary semi-axis `semi_minor`.
struct SpectralWindow {
  enum class Kind { interval, ellipse };

  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double omega = 0.0;  ///< min of E on the real axis
  Kind kind = Kind::interval;
  double semi_minor = 0.0;

  static SpectralWindow interval(double lo, double hi);
  static SpectralWindow ellipse(double lo, double hi, double semi_minor);
  /// Interval spanning the spectra of Hermitian A and A + D.
  static SpectralWindow from_hermitian(const Matrix& a, const Matrix& a_plus_d);
};

/// Exterior Riemann map pair for a window: psi maps |u| > 1 onto the
/// complement of E with psi(inf) = inf, psi'(inf) > 0, and phi = psi^{-1}.
class ConformalMap {
 public:
  explicit ConformalMap(const SpectralWindow& window);

  Scalar psi(Scalar u) const;
  Scalar phi(Scalar z) const;
  /// phi on the real axis left of E (real and below -1 there).
  double phi_real(double x) const;
  double psi_real(double u) const;

  double center() const noexcept { return c_; }
  double half_width() const noexcept { return delta_; }
  const SpectralWindow& window() const noexcept { return window_; }

 private:
  SpectralWindow window_;
  double c_;
  double delta_;  ///< focal half-distance (interval: half-width)
  double rho_;    ///< 1 for intervals; (a + b)/delta for ellipses
};

}  // namespace rku
