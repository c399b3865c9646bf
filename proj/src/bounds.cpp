#include "rku/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace rku {

namespace {

constexpr double one_plus_sqrt2_sq = (1.0 + std::numbers::sqrt2) * (1.0 + std::numbers::sqrt2);

const MarkovSupport& require_markov(const FunctionSpec& f) {
  if (!f.markov_support()) throw Error(ErrorCode::invalid_argument, f.name() + " is not a Markov function");
  return *f.markov_support();
}

void require_support_left(const SpectralWindow& window, const MarkovSupport& support) {
  if (!(support.beta < window.omega)) {
    throw Error(ErrorCode::support_overlaps_spectrum, "Markov support reaches the spectral window");
  }
}

// Mapped pole; throws when the pole lies in E.
struct MappedPole {
  bool infinite;
  Scalar v;
};

std::vector<MappedPole> map_poles(const std::vector<Pole>& poles, const ConformalMap& map) {
  std::vector<MappedPole> out;
  const SpectralWindow& w = map.window();
  for (const Pole& p : poles) {
    if (p.is_infinite()) {
      out.push_back({true, 0.0});
      continue;
    }
    const Scalar z = p.value();
    bool inside;
    if (w.kind == SpectralWindow::Kind::interval) {
      inside = z.imag() == 0.0 && z.real() >= w.lambda_min && z.real() <= w.lambda_max;
    } else {
      const double a = 0.5 * (w.lambda_max - w.lambda_min);
      const double x = (z.real() - map.center()) / a;
      const double y = w.semi_minor > 0.0 ? z.imag() / w.semi_minor : (z.imag() == 0.0 ? 0.0 : 2.0);
      inside = x * x + y * y <= 1.0;
    }
    if (inside) throw Error(ErrorCode::pole_inside_domain, "pole lies in the spectral window");
    out.push_back({false, map.phi(z)});
  }
  return out;
}

// 1/|B_m(x)| at x = phi(beta) / t.
double inverse_blaschke(const std::vector<MappedPole>& poles, double pb, double t) {
  double value = 1.0;
  for (const MappedPole& p : poles) {
    if (p.infinite) {
      value *= t / std::abs(pb);
    } else {
      value *= std::abs(pb - p.v * t) / std::abs(t - pb * std::conj(p.v));
    }
  }
  return value;
}

double sup_abs_on_window(const SpectralWindow& window, const std::function<double(double)>& g) {
  const int samples = 2001;
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = window.lambda_min + (window.lambda_max - window.lambda_min) * double(i) / double(samples - 1);
    best = std::max(best, std::abs(g(x)));
  }
  return best;
}

double curve_rate(const std::vector<double>& etas) {
  if (etas.empty() || !(etas.back() > 0.0)) return 0.0;
  return std::pow(etas.back(), 1.0 / double(etas.size()));
}

}  // namespace

Index eta_sample_count() {
  if (const char* env = std::getenv("KU_NUM_SAMPLES_ETA")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 16) return Index(v);
  }
  return 4096;
}

double eta_blaschke(const std::vector<Pole>& poles, const ConformalMap& map, const MarkovSupport& support) {
  require_support_left(map.window(), support);
  if (poles.empty()) return 1.0;
  const std::vector<MappedPole> mapped = map_poles(poles, map);
  const double pb = map.phi_real(support.beta);
  const double t_lo = std::isinf(support.alpha) ? 0.0 : pb / map.phi_real(support.alpha);
  if (support.alpha == support.beta) return inverse_blaschke(mapped, pb, 1.0);

  const Index samples = eta_sample_count();
  auto g = [&](double t) { return inverse_blaschke(mapped, pb, t); };
  std::vector<double> ts(std::size_t(samples + 2));
  ts.front() = t_lo;
  ts.back() = 1.0;
  for (Index i = 0; i < samples; ++i) {
    const double theta = std::numbers::pi * (double(i) + 0.5) / double(samples);
    ts[std::size_t(i + 1)] = t_lo + (1.0 - t_lo) * 0.5 * (1.0 - std::cos(theta));
  }
  std::size_t best = 0;
  double best_value = g(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double v = g(ts[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement between the neighbours of the best sample.
  double lo = ts[best == 0 ? 0 : best - 1];
  double hi = ts[std::min(best + 1, ts.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    }
  }
  return std::max({best_value, f1, f2});
}

double eta_blaschke(const PolePlan& plan, Index m, const ConformalMap& map, const MarkovSupport& support) {
  return eta_blaschke(plan.expand(m), map, support);
}

BoundReport markov_bound_hermitian(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& f,
                                   Index m_max) {
  const MarkovSupport& support = require_markov(f);
  require_support_left(window, support);
  const ConformalMap map(window);
  const double pb = std::abs(map.phi_real(support.beta));
  const double sup_f = std::abs(f.value(window.omega));
  BoundReport report;
  report.constant = 4.0 * 2.0 * sup_f / pb;
  std::vector<double> etas;
  for (Index m = 1; m <= m_max; ++m) {
    etas.push_back(eta_blaschke(plan, m, map, support));
    report.values.push_back(report.constant * etas.back());
  }
  report.rate = curve_rate(etas);
  report.note = "4 * (2 |f|_E / |phi(beta)|) * eta_m";
  return report;
}

BoundReport markov_bound_nonhermitian(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& f,
                                      Index m_max, double norm_b, double norm_c) {
  const MarkovSupport& support = require_markov(f);
  require_support_left(window, support);
  const ConformalMap map(window);
  BoundReport report;
  report.constant = 8.0 * std::abs(f.derivative(window.omega)) * norm_b * norm_c;
  std::vector<double> etas;
  for (Index m = 1; m <= m_max; ++m) {
    const double eta = eta_blaschke(plan, m, map, support);
    if (!(eta < 1.0)) throw Error(ErrorCode::eta_not_contracting, "eta_m >= 1 at m = " + std::to_string(m));
    etas.push_back(eta);
    report.values.push_back(report.constant * eta / (1.0 - eta));
  }
  report.rate = curve_rate(etas);
  report.note = "8 |f'(omega)| eta_m / (1 - eta_m) |B| |C|";
  return report;
}

BoundReport poly_update_bound(const SpectralWindow& window, const FunctionSpec& f, Index m_max, double norm_d_fro) {
  if (window.kind != SpectralWindow::Kind::interval) {
    throw Error(ErrorCode::invalid_argument, "poly_update_bound needs an interval window");
  }
  const double lo = window.lambda_min;
  const double hi = window.lambda_max;
  auto fprime = [&](double x) { return f.derivative(Scalar(x, 0.0)); };
  BoundReport report;
  report.constant = 2.0 * one_plus_sqrt2_sq * norm_d_fro;
  report.note = "Chebyshev interpolation proxy for the best approximation of f'";
  const int check = 2001;
  for (Index m = 1; m <= m_max; ++m) {
    // Interpolate f' at m Chebyshev points (degree m - 1), barycentric form.
    const Index k = m;
    std::vector<double> nodes(static_cast<std::size_t>(k));
    std::vector<Scalar> values(static_cast<std::size_t>(k));
    std::vector<double> weights(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j) {
      const double theta = std::numbers::pi * (2.0 * double(j) + 1.0) / (2.0 * double(k));
      nodes[std::size_t(j)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
      values[std::size_t(j)] = fprime(nodes[std::size_t(j)]);
      weights[std::size_t(j)] = (j % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
    }
    double err = 0.0;
    for (int i = 0; i < check; ++i) {
      const double x = lo + (hi - lo) * double(i) / double(check - 1);
      Scalar num = 0.0;
      double den = 0.0;
      Scalar interp = 0.0;
      bool hit = false;
      for (Index j = 0; j < k; ++j) {
        const double diff = x - nodes[std::size_t(j)];
        if (diff == 0.0) {
          interp = values[std::size_t(j)];
          hit = true;
          break;
        }
        num += weights[std::size_t(j)] / diff * values[std::size_t(j)];
        den += weights[std::size_t(j)] / diff;
      }
      if (!hit) interp = num / den;
      err = std::max(err, std::abs(fprime(x) - interp));
    }
    report.values.push_back(report.constant * err);
  }
  if (report.values.size() > 1 && report.values.front() > 0.0 && report.values.back() > 0.0) {
    report.rate = std::pow(report.values.back() / report.values.front(), 1.0 / double(report.values.size() - 1));
  }
  return report;
}

double frechet_perturbation_bound(const SpectralWindow& window, const FunctionSpec& f, double norm_d_fro) {
  const double sup = sup_abs_on_window(window, [&](double x) { return std::abs(f.derivative(Scalar(x, 0.0))); });
  return one_plus_sqrt2_sq * sup * norm_d_fro;
}

BoundReport markov_modified_bound(const SpectralWindow& window, const PolePlan& plan, const FunctionSpec& fhat,
                                  Index m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "markov_modified_bound: m must be positive");
  if (!plan.at(m - 1).is_infinite()) {
    throw Error(ErrorCode::last_pole_not_infinite, "pole m must be infinite");
  }
  const MarkovSupport& support = require_markov(fhat);
  require_support_left(window, support);
  const ConformalMap map(window);
  const double p1 = std::max(std::abs(window.lambda_min), std::abs(window.lambda_max));
  const double pb = std::abs(map.phi_real(support.beta));
  const double eta = eta_blaschke(plan.expand(m - 1), map, support);
  BoundReport report;
  report.constant = p1 * 4.0 * 2.0 * std::abs(fhat.value(window.omega)) / pb;
  report.values.push_back(report.constant * eta);
  report.rate = m > 1 ? std::pow(eta, 1.0 / double(m - 1)) : 0.0;
  report.note = "|z|_E * 4 * (2 |fhat|_E / |phi(beta)|) * eta_{m-1}";
  return report;
}

double sign_bound_constant(double norm_a_plus_d, double norm_bj, double norm_b) {
  return 4.0 * norm_a_plus_d + 2.0 * norm_bj * norm_b;
}

BoundReport sign_update_bound(const SpectralWindow& squared_window, const PolePlan& squared_plan, Index m_max,
                              double norm_a_plus_d, double norm_bj, double norm_b) {
  const FunctionSpec f = FunctionSpec::inv_sqrt();
  const MarkovSupport& support = require_markov(f);
  require_support_left(squared_window, support);
  const ConformalMap map(squared_window);
  const double pb = std::abs(map.phi_real(support.beta));
  BoundReport report;
  report.constant =
      sign_bound_constant(norm_a_plus_d, norm_bj, norm_b) * 2.0 * std::abs(f.value(squared_window.omega)) / pb;
  std::vector<double> etas;
  for (Index m = 1; m <= m_max; ++m) {
    etas.push_back(eta_blaschke(squared_plan, m, map, support));
    report.values.push_back(report.constant * etas.back());
  }
  report.rate = curve_rate(etas);
  report.note = "(4 |A+D| + 2 |BJ| |B|) * (2 |f|_E / |phi(beta)|) * eta_m on the squared window";
  return report;
}

}  // namespace rku
