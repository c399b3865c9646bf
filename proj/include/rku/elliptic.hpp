#pragma once

namespace rku {

/// Arithmetic-geometric mean of two nonnegative numbers.
double agm(double a, double b);

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

/// Complete elliptic integrals and Jacobi functions for a real modulus k.
///
/// Parameters are stored as the pair (k, k') with k^2 + k'^2 = 1 so that
/// moduli close to 1 keep full relative accuracy in k'.
class EllipticParameters {
 public:
  explicit EllipticParameters(double modulus);
  /// Builds from the complementary modulus k'.
  static EllipticParameters from_complement(double complement);

  double modulus() const noexcept { return k_; }
  double complement() const noexcept { return kp_; }
  /// K(k)
  double K() const noexcept { return big_k_; }
  /// K'(k) = K(k')
  double Kp() const noexcept { return big_kp_; }

  /// sn, cn, dn at real argument u (descending Landen / AGM scheme).
  JacobiValues jacobi(double u) const;
  double sn(double u) const { return jacobi(u).sn; }
  double cn(double u) const { return jacobi(u).cn; }
  double dn(double u) const { return jacobi(u).dn; }

 private:
  EllipticParameters(double k, double kp);
  JacobiValues jacobi_reduced(double u) const;

  double k_;
  double kp_;
  double big_k_;
  double big_kp_;
};

}  // namespace rku
