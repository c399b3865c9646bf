// rku: batch experiments for low-rank updates of matrix functions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rku/experiments.hpp"
#include "rku/matrix_market.hpp"

namespace {

enum Exit { ok = 0, bad_config = 2, bad_input = 3, numerical = 4 };

struct Args {
  std::string experiment = "fig1-invsqrt-single-pole";
  rku::Index n = 200;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  rku::Index m_max = 0;
  std::optional<rku::Index> d;
  std::string poles;
  std::string function = "inv-sqrt";
  std::string a, b, c, j;
  std::string a1, a2, b1, c2;
  std::string out;
};

// out.csv + "alg4-deg10" -> out-alg4-deg10.csv; a non-empty `extension` replaces the original one.
std::string with_suffix(const std::string& path, const std::string& suffix, const std::string& extension = "") {
  const std::filesystem::path p(path);
  const std::string ext = extension.empty() ? p.extension().string() : extension;
  return (p.parent_path() / (p.stem().string() + "-" + suffix + ext)).string();
}

void emit(const rku::Curve& curve, const std::string& path) {
  if (path.empty()) {
    rku::write_csv(std::cout, curve);
  } else {
    std::ofstream f(path);
    if (!f) throw rku::Error(rku::ErrorCode::io_error, "cannot write " + path);
    rku::write_csv(f, curve);
  }
  std::cout << rku::summary_line(curve) << '\n';
}

rku::ExperimentSettings settings(const Args& args, double default_tol, rku::Index default_d = 2) {
  rku::ExperimentSettings s;
  s.n = args.n;
  s.seed = args.seed;
  s.m_max = args.m_max;
  s.tol = args.tol.value_or(default_tol);
  s.d = args.d.value_or(default_d);
  return s;
}

rku::Matrix load(const std::string& path, const char* flag) {
  if (path.empty()) throw CLI::ValidationError(flag, "required for this experiment");
  return rku::read_matrix_market_file(path);
}

bool hermitian(const rku::Matrix& a) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

void run_custom(const Args& args) {
  const rku::Matrix a = load(args.a, "--matrix-a");
  const rku::Matrix b = load(args.b, "--matrix-b");
  const rku::FunctionSpec f = rku::FunctionSpec::parse(args.function);
  rku::UpdateProblem problem;
  if (!args.j.empty()) {
    if (!args.c.empty()) throw CLI::ValidationError("--matrix-c", "give either --matrix-c or --matrix-j");
    if (!hermitian(a)) throw CLI::ValidationError("--matrix-j", "needs a Hermitian --matrix-a");
    problem = rku::UpdateProblem::hermitian(a, b, load(args.j, "--matrix-j"));
  } else {
    const rku::Structure s = hermitian(a) ? rku::Structure::hermitian : rku::Structure::general;
    problem = rku::UpdateProblem::low_rank(a, b, load(args.c, "--matrix-c"), s);
  }
  emit(rku::run_custom(problem, f, args.poles, settings(args, 1e-8)), args.out);
}

void run_sylvester(const Args& args) {
  rku::SylvesterProblem p{load(args.a1, "--matrix-a1"), load(args.a2, "--matrix-a2"), load(args.b1, "--matrix-b1"),
                          load(args.c2, "--matrix-c2")};
  const rku::SylvesterRun run = rku::run_sylvester(p, args.poles, settings(args, 1e-10, 1));
  if (args.out.empty()) {
    rku::write_sylvester_csv(std::cout, run.result);
  } else {
    std::ofstream f(args.out);
    if (!f) throw rku::Error(rku::ErrorCode::io_error, "cannot write " + args.out);
    rku::write_sylvester_csv(f, run.result);
    rku::write_matrix_market_file(with_suffix(args.out, "left", ".mtx"), run.result.left);
    rku::write_matrix_market_file(with_suffix(args.out, "right", ".mtx"), run.result.right);
  }
  std::cout << rku::summary_line(run.curve) << '\n';
}

void run(const Args& args) {
  const std::string& e = args.experiment;
  if (e == "fig1-invsqrt-single-pole") {
    emit(rku::run_fig1(settings(args, 0.0)), args.out);
  } else if (e == "fig2-invsqrt-quasiopt") {
    emit(rku::run_fig2(settings(args, 0.0)), args.out);
  } else if (e == "fig3-sign") {
    const rku::ExperimentSettings s = settings(args, 0.0);
    const rku::SignInstance inst = rku::make_sign_instance(s.n, s.seed);
    for (rku::Index degree : {10, 2}) {
      for (const rku::Curve& curve : {rku::run_sign_alg4(inst, degree, s), rku::run_sign_alg3(inst, degree, s)}) {
        std::cerr << "# " << curve.label << '\n';
        if (args.out.empty()) std::cout << "# " << curve.label << '\n';
        emit(curve, args.out.empty() ? "" : with_suffix(args.out, curve.label));
      }
    }
  } else if (e == "custom") {
    run_custom(args);
  } else if (e == "sylvester") {
    run_sylvester(args);
  } else {
    throw CLI::ValidationError("--experiment", "unknown experiment '" + e + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational Krylov approximation of f(A + B C^*) - f(A)"};
  Args args;
  app.add_option("--experiment", args.experiment,
                 "fig1-invsqrt-single-pole | fig2-invsqrt-quasiopt | fig3-sign | custom | sylvester")
      ->capture_default_str();
  app.add_option("--n", args.n, "order of the synthetic test matrix")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", args.seed, "seed for the random vector")->capture_default_str();
  app.add_option("--tol", args.tol, "estimator tolerance (0 runs to --m-max)")->check(CLI::NonNegativeNumber);
  app.add_option("--m-max", args.m_max, "iteration limit (0 picks the experiment default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--d", args.d, "look-back of the error estimator (default 2, 1 for sylvester)")->check(CLI::PositiveNumber);
  app.add_option("--poles", args.poles,
                 "pole file or strategy: single-markov, quasi-optimal:N, zolotarev-sign:N, zolotarev-invsqrt:N, "
                 "exp:M, extended, polynomial, file:PATH");
  app.add_option("--function", args.function, "exp, inv-sqrt, sqrt, log1p-over-z, inv-power:G, sign, inverse")
      ->capture_default_str();
  app.add_option("--matrix-a", args.a, "Matrix Market file for A");
  app.add_option("--matrix-b", args.b, "Matrix Market file for B");
  app.add_option("--matrix-c", args.c, "Matrix Market file for C");
  app.add_option("--matrix-j", args.j, "Matrix Market file for J (C = B J^*)");
  app.add_option("--matrix-a1", args.a1, "Sylvester A1");
  app.add_option("--matrix-a2", args.a2, "Sylvester A2");
  app.add_option("--matrix-b1", args.b1, "Sylvester B1");
  app.add_option("--matrix-c2", args.c2, "Sylvester C2");
  app.add_option("--out", args.out, "CSV output path (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  try {
    run(args);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_config;
  } catch (const rku::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case rku::ErrorCode::invalid_argument:
        return bad_config;
      case rku::ErrorCode::io_error:
        return bad_input;
      default:
        return numerical;
    }
  }
  return ok;
}
