#include "rku/function.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace rku {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Gauss-Legendre nodes/weights on [0, 1].
struct GaussRule {
  std::array<double, 12> nodes;
  std::array<double, 12> weights;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r{};
    constexpr int n = 12;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = 0.5 * (1.0 - x);
      r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// Distance from z to the ray (-inf, c].
double ray_distance(Scalar z, double c) {
  if (z.real() >= c) return std::abs(z - c);
  return std::abs(z.imag());
}

Scalar horner(const std::vector<Scalar>& c, Scalar z) {
  Scalar acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Scalar> trimmed(std::vector<Scalar> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

std::vector<Scalar> poly_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Scalar> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void poly_add_into(std::vector<Scalar>& acc, const std::vector<Scalar>& b, Scalar scale) {
  if (acc.size() < b.size()) acc.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) acc[i] += scale * b[i];
}

std::vector<Scalar> linear_power(Scalar root, int power) {
  std::vector<Scalar> out{1.0};
  for (int k = 0; k < power; ++k) out = poly_mul(out, {-root, 1.0});
  return out;
}

}  // namespace

Scalar expm1(Scalar z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Scalar log1p(Scalar z) {
  const double x = z.real();
  const double y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction RationalFunction::from_partial_fractions(std::vector<Scalar> polynomial,
                                                          std::vector<PartialFractionTerm> terms) {
  for (const auto& t : terms) {
    if (t.power < 1) throw Error(ErrorCode::invalid_argument, "partial fraction power must be >= 1");
  }
  RationalFunction r;
  r.polynomial_ = std::move(polynomial);
  r.terms_ = std::move(terms);
  return r;
}

RationalFunction RationalFunction::from_coefficients(std::vector<Scalar> p, std::vector<Scalar> q) {
  p = trimmed(std::move(p));
  q = trimmed(std::move(q));
  if (q.empty()) throw Error(ErrorCode::invalid_argument, "zero denominator polynomial");
  const std::size_t dq = q.size() - 1;

  // Long division p = quotient * q + remainder.
  std::vector<Scalar> rem = p;
  std::vector<Scalar> quotient;
  if (rem.size() >= q.size()) {
    quotient.assign(rem.size() - dq, 0.0);
    for (std::size_t k = rem.size(); k-- > dq;) {
      const Scalar c = rem[k] / q[dq];
      quotient[k - dq] = c;
      for (std::size_t i = 0; i <= dq; ++i) rem[k - dq + i] -= c * q[i];
    }
    rem.resize(dq);
  }

  std::vector<PartialFractionTerm> terms;
  if (dq > 0) {
    Matrix companion = Matrix::Zero(Index(dq), Index(dq));
    for (std::size_t i = 1; i < dq; ++i) companion(Index(i), Index(i - 1)) = 1.0;
    for (std::size_t i = 0; i < dq; ++i) companion(Index(i), Index(dq - 1)) = -q[i] / q[dq];
    Eigen::ComplexEigenSolver<Matrix> es(companion, false);
    std::vector<Scalar> dqc(dq);
    for (std::size_t i = 1; i <= dq; ++i) dqc[i - 1] = double(i) * q[i];
    const Vector& roots = es.eigenvalues();
    const double scale = std::max(roots.cwiseAbs().maxCoeff(), 1.0);
    for (Index i = 0; i < Index(dq); ++i) {
      for (Index k = 0; k < i; ++k) {
        if (std::abs(roots(i) - roots(k)) <= 1e-6 * scale) {
          throw Error(ErrorCode::invalid_argument, "denominator has a repeated root; use partial fractions");
        }
      }
    }
    for (Index i = 0; i < Index(dq); ++i) {
      const Scalar root = roots(i);
      terms.push_back({root, 1, horner(rem, root) / horner(dqc, root)});
    }
  }
  RationalFunction r = from_partial_fractions(std::move(quotient), std::move(terms));
  r.numerator_ = std::move(p);
  r.denominator_ = std::move(q);
  return r;
}

Scalar RationalFunction::operator()(Scalar z) const {
  Scalar acc = horner(polynomial_, z);
  for (const auto& t : terms_) acc += t.residue * std::pow(z - t.pole, -t.power);
  return acc;
}

Scalar RationalFunction::derivative(Scalar z) const {
  Scalar acc = 0.0;
  for (std::size_t k = polynomial_.size(); k-- > 1;) acc = acc * z + double(k) * polynomial_[k];
  for (const auto& t : terms_) acc -= double(t.power) * t.residue * std::pow(z - t.pole, -t.power - 1);
  return acc;
}

Scalar RationalFunction::divided_difference(Scalar a, Scalar b) const {
  if (a == b) return derivative(a);
  Scalar acc = 0.0;
  // z^k: sum_{i<k} a^i b^(k-1-i)
  for (std::size_t k = 1; k < polynomial_.size(); ++k) {
    Scalar s = 0.0;
    Scalar ai = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      s += ai * std::pow(b, int(k - 1 - i));
      ai *= a;
    }
    acc += polynomial_[k] * s;
  }
  // (z - xi)^(-p): -x y sum_{k<p} x^k y^(p-1-k), x = 1/(a - xi), y = 1/(b - xi)
  for (const auto& t : terms_) {
    const Scalar x = 1.0 / (a - t.pole);
    const Scalar y = 1.0 / (b - t.pole);
    Scalar s = 0.0;
    Scalar xk = 1.0;
    for (int k = 0; k < t.power; ++k) {
      s += xk * std::pow(y, t.power - 1 - k);
      xk *= x;
    }
    acc -= t.residue * x * y * s;
  }
  return acc;
}

std::vector<std::pair<Scalar, int>> RationalFunction::poles() const {
  std::vector<std::pair<Scalar, int>> out;
  for (const auto& t : terms_) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == t.pole; });
    if (it == out.end()) {
      out.emplace_back(t.pole, t.power);
    } else {
      it->second = std::max(it->second, t.power);
    }
  }
  return out;
}

std::vector<Scalar> RationalFunction::denominator() const {
  if (!denominator_.empty()) return denominator_;
  std::vector<Scalar> q{1.0};
  for (const auto& [pole, mult] : poles()) q = poly_mul(q, linear_power(pole, mult));
  return q;
}

std::vector<Scalar> RationalFunction::numerator() const {
  if (!numerator_.empty() || !denominator_.empty()) return numerator_;
  const auto ps = poles();
  std::vector<Scalar> q = denominator();
  std::vector<Scalar> p = poly_mul(polynomial_, q);
  for (const auto& t : terms_) {
    // q / (z - pole)^power
    std::vector<Scalar> part{1.0};
    for (const auto& [pole, mult] : ps) {
      const int remaining = pole == t.pole ? mult - t.power : mult;
      part = poly_mul(part, linear_power(pole, remaining));
    }
    poly_add_into(p, part, t.residue);
  }
  return trimmed(p);
}

// ---------------------------------------------------------------------------
// FunctionSpec

FunctionSpec FunctionSpec::exp() { return FunctionSpec(Kind::exp, "exp"); }

FunctionSpec FunctionSpec::inv_sqrt() {
  FunctionSpec f(Kind::inv_sqrt, "inv-sqrt");
  f.gamma_ = 0.5;
  f.support_ = MarkovSupport{-inf, 0.0};
  return f;
}

FunctionSpec FunctionSpec::sqrt() { return FunctionSpec(Kind::sqrt, "sqrt"); }

FunctionSpec FunctionSpec::log1p_over_z() {
  FunctionSpec f(Kind::log1p_over_z, "log1p-over-z");
  f.support_ = MarkovSupport{-inf, -1.0};
  return f;
}

FunctionSpec FunctionSpec::inv_power(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::invalid_argument, "inv-power needs 0 < gamma < 1");
  FunctionSpec f(Kind::inv_power, "inv-power:" + std::to_string(gamma));
  f.gamma_ = gamma;
  f.support_ = MarkovSupport{-inf, 0.0};
  return f;
}

FunctionSpec FunctionSpec::sign() { return FunctionSpec(Kind::sign, "sign"); }

FunctionSpec FunctionSpec::inverse() {
  FunctionSpec f(Kind::inverse, "inverse");
  f.support_ = MarkovSupport{0.0, 0.0};
  return f;
}

FunctionSpec FunctionSpec::rational(RationalFunction r) {
  FunctionSpec f(Kind::rational, "rational");
  f.rational_ = std::move(r);
  return f;
}

FunctionSpec FunctionSpec::polynomial(std::vector<Scalar> coefficients) {
  return rational(RationalFunction::from_partial_fractions(std::move(coefficients), {}));
}

FunctionSpec FunctionSpec::custom(std::string name, ScalarMap value, ScalarMap derivative) {
  FunctionSpec f(Kind::custom, std::move(name));
  f.custom_value_ = std::move(value);
  f.custom_derivative_ = std::move(derivative);
  return f;
}

Scalar FunctionSpec::value(Scalar z) const {
  switch (kind_) {
    case Kind::exp: return std::exp(z);
    case Kind::inv_sqrt: return 1.0 / std::sqrt(z);
    case Kind::sqrt: return std::sqrt(z);
    case Kind::log1p_over_z: {
      if (std::abs(z) < 0.1) {
        Scalar acc = 0.0;
        for (int k = 24; k >= 0; --k) acc = acc * (-z) + 1.0 / (k + 1.0);
        return acc;
      }
      return log1p(z) / z;
    }
    case Kind::inv_power: return std::exp(-gamma_ * std::log(z));
    case Kind::sign: return z.real() > 0.0 ? 1.0 : -1.0;
    case Kind::inverse: return 1.0 / z;
    case Kind::rational: return rational_(z);
    case Kind::custom: return custom_value_(z);
  }
  return 0.0;
}

Scalar FunctionSpec::derivative(Scalar z) const {
  switch (kind_) {
    case Kind::exp: return std::exp(z);
    case Kind::inv_sqrt: return -0.5 / (z * std::sqrt(z));
    case Kind::sqrt: return 0.5 / std::sqrt(z);
    case Kind::log1p_over_z: {
      if (std::abs(z) < 0.1) {
        // d/dz sum (-z)^k / (k+1) = sum_{k>=1} (-1)^k k z^(k-1) / (k+1)
        Scalar acc = 0.0;
        for (int k = 25; k >= 1; --k) acc = acc * z + ((k % 2) ? -1.0 : 1.0) * k / (k + 1.0);
        return acc;
      }
      return (z / (1.0 + z) - log1p(z)) / (z * z);
    }
    case Kind::inv_power: return -gamma_ * std::exp(-(gamma_ + 1.0) * std::log(z));
    case Kind::sign: return 0.0;
    case Kind::inverse: return -1.0 / (z * z);
    case Kind::rational: return rational_.derivative(z);
    case Kind::custom: return custom_derivative_(z);
  }
  return 0.0;
}

double FunctionSpec::singular_distance(Scalar z) const {
  switch (kind_) {
    case Kind::exp:
    case Kind::custom: return inf;
    case Kind::inv_sqrt:
    case Kind::sqrt:
    case Kind::inv_power: return ray_distance(z, 0.0);
    case Kind::log1p_over_z: return ray_distance(z, -1.0);
    case Kind::sign: return std::abs(z.real());
    case Kind::inverse: return std::abs(z);
    case Kind::rational: {
      double d = inf;
      for (const auto& t : rational_.terms()) d = std::min(d, std::abs(z - t.pole));
      return d;
    }
  }
  return inf;
}

void FunctionSpec::require_defined(Scalar z, double scale) const {
  const double threshold = tol::axis * std::max(scale, std::numeric_limits<double>::min());
  if (!(singular_distance(z) > threshold)) {
    throw Error(ErrorCode::singularity_on_spectrum,
                name_ + " is not defined at (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
  }
}

Scalar FunctionSpec::divided_difference(Scalar a, Scalar b) const {
  if (a == b) return derivative(a);
  switch (kind_) {
    case Kind::sign: return (value(a) - value(b)) / (a - b);
    case Kind::inverse: return -1.0 / (a * b);
    case Kind::inv_sqrt: {
      const Scalar sa = std::sqrt(a), sb = std::sqrt(b);
      return -1.0 / (sa * sb * (sa + sb));
    }
    case Kind::sqrt: return 1.0 / (std::sqrt(a) + std::sqrt(b));
    case Kind::rational: return rational_.divided_difference(a, b);
    default: break;
  }
  const double h = std::abs(a - b);
  const double d = std::min(singular_distance(a), singular_distance(b));
  const bool close = std::isinf(d) ? h <= 2.0 : h <= 0.25 * d;
  if (!close) return (value(a) - value(b)) / (a - b);
  // f[a, b] = int_0^1 f'(b + t (a - b)) dt
  const auto& rule = gauss_rule();
  Scalar acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * derivative(b + rule.nodes[i] * (a - b));
  return acc;
}

FunctionSpec FunctionSpec::parse(const std::string& text) {
  if (text == "exp") return exp();
  if (text == "inv-sqrt") return inv_sqrt();
  if (text == "sqrt") return sqrt();
  if (text == "log1p-over-z") return log1p_over_z();
  if (text == "sign") return sign();
  if (text == "inverse") return inverse();
  const std::string prefix = "inv-power:";
  if (text.rfind(prefix, 0) == 0) return inv_power(std::stod(text.substr(prefix.size())));
  throw Error(ErrorCode::invalid_argument, "unknown function '" + text + "'");
}

}  // namespace rku
