#include "rku/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "rku/types.hpp"

namespace rku {

double agm(double a, double b) {
  if (a < 0.0 || b < 0.0) throw Error(ErrorCode::invalid_argument, "agm: negative argument");
  if (a == 0.0 || b == 0.0) return 0.0;
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return 0.5 * (a + b);
}

namespace {

double complete_integral(double complement) {
  if (complement <= 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / (2.0 * agm(1.0, complement));
}

}  // namespace

EllipticParameters::EllipticParameters(double k, double kp)
    : k_(k), kp_(kp), big_k_(complete_integral(kp)), big_kp_(complete_integral(k)) {}

EllipticParameters::EllipticParameters(double modulus)
    : EllipticParameters(modulus, std::sqrt((1.0 - modulus) * (1.0 + modulus))) {
  if (!(modulus >= 0.0 && modulus < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "elliptic modulus must lie in [0, 1)");
  }
}

EllipticParameters EllipticParameters::from_complement(double complement) {
  if (!(complement > 0.0 && complement <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "complementary modulus must lie in (0, 1]");
  }
  return EllipticParameters(std::sqrt((1.0 - complement) * (1.0 + complement)), complement);
}

JacobiValues EllipticParameters::jacobi_reduced(double u) const {
  if (k_ == 0.0) return {std::sin(u), std::cos(u), 1.0};
  // Descending Landen sequence.
  std::array<double, 40> a{};
  std::array<double, 40> c{};
  a[0] = 1.0;
  double b = kp_;
  c[0] = k_;
  int n = 0;
  while (n < 38 && std::abs(c[n]) > 1e-17 * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double prev = phi;
  for (int i = n; i > 0; --i) {
    prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = n == 0 ? 1.0 : cn / std::cos(prev - phi);
  return {sn, cn, dn};
}

JacobiValues EllipticParameters::jacobi(double u) const {
  if (!std::isfinite(u)) throw Error(ErrorCode::invalid_argument, "jacobi: argument not finite");
  const double period = 4.0 * big_k_;
  double sign = 1.0;
  if (u < 0.0) {
    u = -u;
    sign = -1.0;
  }
  u = std::fmod(u, period);
  // Reduce to [0, 2K] then to [0, K].
  double cn_sign = 1.0;
  double sn_sign = sign;
  if (u > 2.0 * big_k_) {
    u -= 2.0 * big_k_;
    sn_sign = -sn_sign;
    cn_sign = -cn_sign;
  }
  if (u > big_k_) {
    u = 2.0 * big_k_ - u;
    cn_sign = -cn_sign;
  }
  JacobiValues v;
  if (u > 0.5 * big_k_) {
    // Reflection about K keeps dn accurate for moduli near 1.
    const JacobiValues r = jacobi_reduced(big_k_ - u);
    v.sn = r.cn / r.dn;
    v.cn = kp_ * r.sn / r.dn;
    v.dn = kp_ / r.dn;
  } else {
    v = jacobi_reduced(u);
  }
  v.sn *= sn_sign;
  v.cn *= cn_sign;
  return v;
}

}  // namespace rku
