#include "rku/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rku/oracle.hpp"

namespace rku {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  }
  return m;
}

Matrix Rng::complex_normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal();
      m(i, j) = Scalar(re, normal());
    }
  }
  return m;
}

Vector random_vector(Rng& rng, Index n, double norm) {
  Vector v = rng.normal_vector(n);
  return v * (norm / v.norm());
}

Matrix logspace_diagonal(Index n, double lo, double hi) {
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    a(i, i) = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return a;
}

Matrix symmetric_gap_diagonal(Index half, double lo, double hi) {
  Matrix a = Matrix::Zero(2 * half, 2 * half);
  for (Index i = 0; i < half; ++i) {
    const double t = half == 1 ? 0.0 : double(i) / double(half - 1);
    const double v = lo + t * (hi - lo);
    a(i, i) = -hi + t * (hi - lo);
    a(half + i, half + i) = v;
  }
  return a;
}

void write_csv(std::ostream& out, const Curve& curve) {
  out << "m,error_true,error_estimate,bound\n";
  char buf[128];
  for (const CurveRow& r : curve.rows) {
    out << r.m << ',';
    std::snprintf(buf, sizeof buf, "%.15e,%.15e,", r.error_true, r.error_estimate);
    out << buf;
    if (r.bound) {
      std::snprintf(buf, sizeof buf, "%.15e", *r.bound);
      out << buf;
    }
    out << '\n';
  }
}

std::string summary_line(const Curve& curve) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", curve.final_error);
  std::ostringstream s;
  s << "converged=" << (curve.converged ? "true" : "false") << " iterations=" << curve.iterations
    << " final_error=" << buf;
  return s.str();
}

namespace {

Index default_m(const ExperimentSettings& s, Index fallback) { return s.m_max > 0 ? s.m_max : fallback; }

Index clamp_to_plan(Index m, const PolePlan& plan) { return plan.capacity() >= 0 ? std::min(m, plan.capacity()) : m; }

Curve curve_from_report(const std::string& label, const UpdateReport& report, const KrylovBasis& basis,
                        const std::vector<double>* bound) {
  Curve c;
  c.label = label;
  for (std::size_t i = 0; i < report.estimates.size(); ++i) {
    CurveRow row;
    row.m = Index(i + 1);
    row.dim = basis.dim_at(std::min(row.m, basis.steps()));
    row.error_true = i < report.true_errors.size() ? report.true_errors[i] : std::numeric_limits<double>::quiet_NaN();
    row.error_estimate = report.estimates[i];
    if (bound && i < bound->size()) row.bound = (*bound)[i];
    c.rows.push_back(row);
  }
  c.converged = report.converged;
  c.iterations = report.iterations;
  c.breakdown = report.breakdown;
  if (!c.rows.empty()) {
    c.final_error = report.true_errors.empty() ? c.rows.back().error_estimate : c.rows.back().error_true;
  }
  return c;
}

Curve run_markov_curve(const std::string& label, const MarkovInstance& inst, const PolePlan& plan, const FunctionSpec& f,
                       const ExperimentSettings& s, Index m_max) {
  UpdateOptions opt;
  opt.m_max = m_max;
  opt.tol = s.tol;
  opt.d = s.d;
  opt.reference = inst.reference;
  opt.stop_on_breakdown = true;
  const UpdateResult r = run_update(UpdateProblem::hermitian(inst.a, inst.b, Matrix::Identity(1, 1)), f, plan, opt);
  const BoundReport bound = markov_bound_hermitian(inst.window, plan, f, m_max);
  Curve c = curve_from_report(label, r.report, r.state.left, &bound.values);
  c.reference_norm = inst.norm_fa;
  return c;
}

}  // namespace

MarkovInstance make_markov_instance(Index n, std::uint64_t seed, const FunctionSpec& f) {
  MarkovInstance inst;
  Rng rng(seed);
  inst.a = logspace_diagonal(n, 1e-3, 1e3);
  inst.b = random_vector(rng, n, 100.0);
  const Matrix d = inst.b * inst.b.adjoint();
  inst.window = SpectralWindow::from_hermitian(inst.a, inst.a + d);
  inst.reference = dense_update_extended(inst.a, d, f);
  inst.norm_fa = spectral_norm(funm_small(inst.a, f, Structure::hermitian));
  return inst;
}

Curve run_fig1(const ExperimentSettings& s) {
  const FunctionSpec f = FunctionSpec::inv_sqrt();
  const MarkovInstance inst = make_markov_instance(s.n, s.seed, f);
  const SinglePole pole = markov_single_pole(inst.window, *f.markov_support());
  return run_markov_curve("fig1", inst, PolePlan::repeated(pole.pole), f, s, default_m(s, 140));
}

Curve run_fig2(const ExperimentSettings& s) {
  const FunctionSpec f = FunctionSpec::inv_sqrt();
  const MarkovInstance inst = make_markov_instance(s.n, s.seed, f);
  const PolePlan base = quasi_optimal_poles(inst.window, *f.markov_support(), 10);
  const PolePlan plan(base.base(), PolePlan::Repetition::cyclic, PolePlan::Ordering::leja);
  return run_markov_curve("fig2", inst, plan, f, s, default_m(s, 60));
}

SignInstance make_sign_instance(Index n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::invalid_argument, "sign instance needs an even n >= 2");
  SignInstance inst;
  Rng rng(seed);
  inst.a = symmetric_gap_diagonal(n / 2, inst.gap_lo, inst.gap_hi);
  inst.b = random_vector(rng, n, 1.0);
  inst.reference = dense_update_extended(inst.a, inst.b * inst.b.adjoint(), FunctionSpec::sign());
  return inst;
}

Curve run_sign_alg4(const SignInstance& inst, Index degree, const ExperimentSettings& s) {
  const Index m_max = default_m(s, 100);
  const PolePlan base = zolotarev_inv_sqrt_poles(inst.gap_lo, inst.gap_hi, degree);
  const PolePlan plan(base.base(), PolePlan::Repetition::cyclic, PolePlan::Ordering::leja);
  SignUpdateInput in{inst.a, inst.b, Matrix::Identity(1, 1), plan};
  SignUpdateOptions opt;
  opt.m_max = m_max;
  opt.tol = s.tol;
  opt.d = s.d;
  opt.reference = inst.reference;
  opt.stop_on_breakdown = true;
  const SignUpdateResult r = sign_update(in, opt);

  const Matrix apd = inst.a + inst.b * inst.b.adjoint();
  const RealVector ea = hermitian_eigenvalues(inst.a);
  const RealVector eb = hermitian_eigenvalues(apd);
  const double lo = std::min(ea.cwiseAbs2().minCoeff(), eb.cwiseAbs2().minCoeff());
  const double hi = std::max(ea.cwiseAbs2().maxCoeff(), eb.cwiseAbs2().maxCoeff());
  const double norm_b = inst.b.norm();
  const BoundReport bound =
      sign_update_bound(SpectralWindow::interval(lo, hi), plan, m_max, spectral_norm(apd), norm_b, norm_b);
  return curve_from_report("alg4-deg" + std::to_string(degree), r.report, r.basis, &bound.values);
}

Curve run_sign_alg3(const SignInstance& inst, Index degree, const ExperimentSettings& s) {
  const Index m_max = default_m(s, 100);
  if (degree < 2 || degree % 2 != 0) throw Error(ErrorCode::invalid_argument, "sign pole count must be even");
  const PolePlan base = zolotarev_sign_poles(inst.gap_lo, inst.gap_hi, degree / 2);
  const PolePlan plan(base.base(), PolePlan::Repetition::cyclic, PolePlan::Ordering::leja);
  UpdateOptions opt;
  opt.m_max = m_max;
  opt.tol = s.tol;
  opt.d = s.d;
  opt.reference = inst.reference;
  opt.stop_on_breakdown = true;
  const UpdateResult r =
      run_update(UpdateProblem::hermitian(inst.a, inst.b, Matrix::Identity(1, 1)), FunctionSpec::sign(), plan, opt);
  return curve_from_report("alg3-deg" + std::to_string(degree), r.report, r.state.left, nullptr);
}

std::optional<CurveRow> first_crossing(const Curve& curve, double threshold) {
  for (const CurveRow& r : curve.rows) {
    if (r.error_true <= threshold) return r;
  }
  return std::nullopt;
}

std::optional<double> fit_rate(const Curve& curve, double lo, double hi, Index m_cap) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const CurveRow& r : curve.rows) {
    if (r.m > m_cap || !(r.error_true >= lo && r.error_true <= hi)) continue;
    const double x = double(r.m);
    const double y = std::log(r.error_true);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) return std::nullopt;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::exp(slope);
}

PolePlan parse_pole_strategy(const std::string& spec, const PoleContext& ctx) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto count = [&](Index fallback) -> Index {
    if (arg.empty()) return fallback;
    try {
      const long v = std::stol(arg);
      if (v < 1) throw Error(ErrorCode::invalid_argument, "pole count must be positive");
      return Index(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_argument, "bad pole count '" + arg + "'");
    }
  };
  auto need_window = [&]() -> std::pair<SpectralWindow, MarkovSupport> {
    if (!ctx.window || !ctx.support) {
      throw Error(ErrorCode::invalid_argument, "strategy '" + name + "' needs a Hermitian problem and a Markov function");
    }
    return {*ctx.window, *ctx.support};
  };
  auto need_gap = [&]() {
    if (!(ctx.gap_lo > 0.0 && ctx.gap_hi >= ctx.gap_lo)) {
      throw Error(ErrorCode::invalid_argument, "strategy '" + name + "' needs a spectral gap around zero");
    }
  };
  using R = PolePlan::Repetition;
  using O = PolePlan::Ordering;
  if (name == "single-markov") {
    const auto [w, sup] = need_window();
    return PolePlan::repeated(markov_single_pole(w, sup).pole);
  }
  if (name == "quasi-optimal") {
    const auto [w, sup] = need_window();
    return PolePlan(quasi_optimal_poles(w, sup, count(10)).base(), R::cyclic, O::leja);
  }
  if (name == "zolotarev-sign") {
    need_gap();
    return PolePlan(zolotarev_sign_poles(ctx.gap_lo, ctx.gap_hi, count(10)).base(), R::cyclic, O::leja);
  }
  if (name == "zolotarev-invsqrt") {
    need_gap();
    return PolePlan(zolotarev_inv_sqrt_poles(ctx.gap_lo, ctx.gap_hi, count(10)).base(), R::cyclic, O::leja);
  }
  if (name == "exp") return exp_single_pole(count(10));
  if (name == "extended") return PolePlan({Pole::finite(0.0), Pole::infinity()}, R::cyclic);
  if (name == "polynomial") return PolePlan::repeated(Pole::infinity());
  const std::string path = name == "file" ? arg : spec;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "unknown pole strategy or unreadable file '" + spec + "'");
  std::stringstream text;
  text << in.rdbuf();
  return PolePlan::from_text(text.str(), R::cyclic);
}

Curve run_custom(const UpdateProblem& problem, const FunctionSpec& f, const std::string& poles,
                 const ExperimentSettings& s) {
  const Index n = problem.a.rows();
  const bool hermitian_update = problem.structure == Structure::hermitian && problem.j.has_value();
  PoleContext ctx;
  if (problem.structure == Structure::hermitian) {
    RealVector eigs = hermitian_eigenvalues(problem.a);
    if (hermitian_update) {
      Matrix apd = problem.a + problem.d();
      apd = (0.5 * (apd + apd.adjoint())).eval();
      ctx.window = SpectralWindow::from_hermitian(problem.a, apd);
      ctx.support = f.markov_support();
      const RealVector more = hermitian_eigenvalues(apd);
      RealVector both(eigs.size() + more.size());
      both << eigs, more;
      eigs = both;
    }
    ctx.gap_lo = eigs.cwiseAbs().minCoeff();
    ctx.gap_hi = eigs.cwiseAbs().maxCoeff();
  }
  const std::string strategy = !poles.empty() ? poles : (ctx.window && ctx.support ? "single-markov" : "polynomial");
  const PolePlan plan = parse_pole_strategy(strategy, ctx);
  const Index m_max = clamp_to_plan(default_m(s, 50), plan);

  UpdateOptions opt;
  opt.m_max = m_max;
  opt.tol = s.tol;
  opt.d = std::min(s.d, m_max);
  opt.stop_on_breakdown = true;
  if (n <= oracle_max_order) {
    opt.reference = dense_update(problem.a, problem.d(), f, hermitian_update ? Structure::hermitian : Structure::general);
  }
  const UpdateResult r = run_update(problem, f, plan, opt);

  std::optional<BoundReport> bound;
  if (hermitian_update && ctx.support) {
    try {
      bound = markov_bound_hermitian(*ctx.window, plan, f, m_max);
    } catch (const Error&) {
      // Poles outside the admissible region: no bound column.
    }
  }
  Curve c = curve_from_report("custom", r.report, r.state.left, bound ? &bound->values : nullptr);
  if (opt.reference) c.reference_norm = spectral_norm(funm_small(problem.a, f, problem.structure));
  return c;
}

SylvesterRun run_sylvester(const SylvesterProblem& problem, const std::string& poles, const ExperimentSettings& s) {
  const PolePlan plan = parse_pole_strategy(poles.empty() ? "polynomial" : poles, PoleContext{});
  SylvesterOptions opt;
  opt.m_max = clamp_to_plan(default_m(s, 50), plan);
  opt.tol = s.tol;
  opt.d = std::min(s.d, opt.m_max);
  opt.track_residual = std::max(problem.a1.rows(), problem.a2.rows()) <= oracle_max_order;
  SylvesterRun run{sylvester_solve_krylov(problem, plan, opt), Curve{}};
  const SylvesterResult& r = run.result;
  Curve& c = run.curve;
  c.label = "sylvester";
  for (std::size_t i = 0; i < r.report.estimates.size(); ++i) {
    CurveRow row;
    row.m = Index(i + 1);
    row.dim = r.u.dim_at(std::min(row.m, r.u.steps()));
    row.error_true = i < r.residuals.size() ? r.residuals[i] : std::numeric_limits<double>::quiet_NaN();
    row.error_estimate = r.report.estimates[i];
    c.rows.push_back(row);
  }
  c.converged = r.report.converged;
  c.iterations = r.report.iterations;
  c.breakdown = r.report.breakdown;
  if (!c.rows.empty()) c.final_error = r.residuals.empty() ? c.rows.back().error_estimate : c.rows.back().error_true;
  return run;
}

void write_sylvester_csv(std::ostream& out, const SylvesterResult& result) {
  out << "m,residual,galerkin,error_estimate\n";
  char buf[160];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < result.report.estimates.size(); ++i) {
    const double res = i < result.residuals.size() ? result.residuals[i] : nan;
    const double gal = i < result.galerkin.size() ? result.galerkin[i] : nan;
    std::snprintf(buf, sizeof buf, "%zu,%.15e,%.15e,%.15e\n", i + 1, res, gal, result.report.estimates[i]);
    out << buf;
  }
}

}  // namespace rku
