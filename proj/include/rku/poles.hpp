#pragma once

#include <vector>

#include "rku/conformal.hpp"
#include "rku/function.hpp"
#include "rku/pole.hpp"

namespace rku {

struct SinglePole {
  Pole pole;
  double rate;  ///< per-step factor |y_opt|^{-1}
};

/// Asymptotically optimal repeated pole for a Markov function with support
/// [alpha, beta] (alpha may be -infinity) on an interval window.
SinglePole markov_single_pole(const SpectralWindow& window, const MarkovSupport& support);

/// m distinct poles from the elliptic-function solution of the
/// Zolotarev-type problem for the Blaschke product on [phi(alpha), phi(beta)],
/// in ascending order. For alpha = -infinity, beta = 0 the resulting eta_m
/// stays below 2 exp(-m pi^2 / log(16 lambda_max / lambda_min)).
PolePlan quasi_optimal_poles(const SpectralWindow& window, const MarkovSupport& support, Index m);

/// 2 exp(-m pi^2 / log(16 lambda_max / lambda_min))
double quasi_optimal_rate_bound(double lambda_min, double lambda_max, Index m);

/// Zolotarev best relative approximant of type (2r-1, 2r) to sign(x) on
/// [-b, -a] u [a, b]:
///   Z(x) = M x prod_{j<r} (x^2 + b^2 c_{2j}) / prod_{j<=r} (x^2 + b^2 c_{2j-1}).
class ZolotarevSign {
 public:
  ZolotarevSign(double a, double b, Index r);

  Index degree() const noexcept { return r_; }
  double value(double x) const;
  /// Sampled sup of |1 - Z(x)| over [a, b].
  double max_error(Index samples = 10000) const;

  /// r conjugate pairs +- i b sqrt(c_{2j-1}).
  std::vector<Pole> sign_poles() const;
  /// Induced poles for z^{-1/2} on [a^2, b^2]: -b^2 c_{2j-1}.
  std::vector<Pole> inv_sqrt_poles() const;
  const std::vector<double>& coefficients() const noexcept { return c_; }

 private:
  double unscaled(double x) const;

  double a_;
  double b_;
  Index r_;
  std::vector<double> c_;  ///< c_1, ..., c_{2r-1} (index 0 holds c_1)
  double scale_ = 1.0;
};

/// Poles of the degree-r Zolotarev sign approximant (r conjugate pairs).
PolePlan zolotarev_sign_poles(double a, double b, Index degree);
/// Poles of the degree-r Zolotarev approximant of z^{-1/2} on [a^2, b^2].
PolePlan zolotarev_inv_sqrt_poles(double a, double b, Index degree);

/// The pole m / sqrt(2) repeated m times (spectrum shifted into (-inf, 0]).
PolePlan exp_single_pole(Index m);

/// 0, inf, 0, inf, ... of length m.
PolePlan extended_plan(Index m);

/// m infinite poles.
PolePlan polynomial_plan(Index m);

/// Rate constant of the optimal rational approximation of exp on (-inf, 0].
inline constexpr double gonchar_rakhmanov_kappa = 9.28903;

}  // namespace rku
