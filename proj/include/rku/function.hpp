#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rku/types.hpp"

namespace rku {

/// Support [alpha, beta] of the measure of a Markov function
/// f(x) = int dmu(t) / (x - t). alpha may be -infinity. A point mass has
/// alpha == beta.
struct MarkovSupport {
  double alpha;
  double beta;
};

/// residue * (z - pole)^(-power)
struct PartialFractionTerm {
  Scalar pole;
  int power = 1;
  Scalar residue;
};

/// Rational function kept in partial-fraction form:
///   r(z) = sum_k polynomial[k] z^k + sum_terms residue (z - pole)^(-power).
/// Coefficient form (numerator / denominator, ascending powers) is derived on
/// request or kept from construction.
class RationalFunction {
 public:
  RationalFunction() = default;

  static RationalFunction from_partial_fractions(std::vector<Scalar> polynomial,
                                                 std::vector<PartialFractionTerm> terms);
  /// p / q with ascending coefficients. q must have simple roots.
  static RationalFunction from_coefficients(std::vector<Scalar> p, std::vector<Scalar> q);

  Scalar operator()(Scalar z) const;
  Scalar derivative(Scalar z) const;
  Scalar divided_difference(Scalar a, Scalar b) const;

  const std::vector<Scalar>& polynomial() const noexcept { return polynomial_; }
  const std::vector<PartialFractionTerm>& terms() const noexcept { return terms_; }

  /// Distinct poles with their multiplicities (highest power present).
  std::vector<std::pair<Scalar, int>> poles() const;

  std::vector<Scalar> numerator() const;
  std::vector<Scalar> denominator() const;

 private:
  std::vector<Scalar> polynomial_;
  std::vector<PartialFractionTerm> terms_;
  std::vector<Scalar> numerator_;
  std::vector<Scalar> denominator_;
};

/// Scalar function applied to matrices by the dense kernels and the Krylov
/// projection. Each kind knows its values, derivative, a stable divided
/// difference and where it is singular.
class FunctionSpec {
 public:
  enum class Kind { exp, inv_sqrt, sqrt, log1p_over_z, inv_power, sign, inverse, rational, custom };

  using ScalarMap = std::function<Scalar(Scalar)>;

  static FunctionSpec exp();
  static FunctionSpec inv_sqrt();
  static FunctionSpec sqrt();
  /// log(1 + z) / z
  static FunctionSpec log1p_over_z();
  /// z^(-gamma), 0 < gamma < 1
  static FunctionSpec inv_power(double gamma);
  static FunctionSpec sign();
  static FunctionSpec inverse();
  static FunctionSpec rational(RationalFunction r);
  /// Polynomial with ascending coefficients (identity, constants, ...).
  static FunctionSpec polynomial(std::vector<Scalar> coefficients);
  /// User map; `derivative` is required for divided differences. The map is
  /// treated as entire.
  static FunctionSpec custom(std::string name, ScalarMap value, ScalarMap derivative);

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  const RationalFunction& rational_function() const { return rational_; }
  const std::optional<MarkovSupport>& markov_support() const noexcept { return support_; }
  const std::string& name() const noexcept { return name_; }

  Scalar value(Scalar z) const;
  Scalar derivative(Scalar z) const;
  /// (f(a) - f(b)) / (a - b), or f'(a) when a == b, evaluated without
  /// catastrophic cancellation for nearby arguments.
  Scalar divided_difference(Scalar a, Scalar b) const;

  /// Distance from z to the set where f is not analytic (infinite for entire f).
  double singular_distance(Scalar z) const;
  /// Raises singularity_on_spectrum if z lies within tol::axis * scale of the
  /// singular set.
  void require_defined(Scalar z, double scale) const;

  /// Parses names used on the command line: exp, inv-sqrt, sqrt, log1p-over-z,
  /// inv-power:<gamma>, sign, inverse.
  static FunctionSpec parse(const std::string& text);

 private:
  FunctionSpec(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  double gamma_ = 0.0;
  RationalFunction rational_;
  ScalarMap custom_value_;
  ScalarMap custom_derivative_;
  std::optional<MarkovSupport> support_;
};

/// exp(z) - 1 without cancellation for small |z|.
Scalar expm1(Scalar z);
/// log(1 + z) without cancellation for small |z|.
Scalar log1p(Scalar z);

}  // namespace rku
