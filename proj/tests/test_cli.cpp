#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rku/experiments.hpp"
#include "rku/matrix_market.hpp"
#include "support.hpp"

using namespace rku;
using namespace rku::testing;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string csv(const Curve& c) {
  std::ostringstream s;
  write_csv(s, c);
  return s.str();
}

UpdateProblem small_hermitian(std::uint64_t seed, Index n) {
  Gen g(seed);
  std::vector<double> eig;
  for (Index i = 0; i < n; ++i) eig.push_back(std::pow(10.0, g.uniform(-1.0, 1.0)));
  const Matrix a = g.hermitian_with(eig);
  const Matrix b = g.complex(n, 1);
  return UpdateProblem::hermitian(a, b, identity(1));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("CSV layout and summary line") {
    Curve c;
    c.rows.push_back({1, 1, 0.5, 0.25, 1.0});
    c.rows.push_back({2, 2, 0.125, 0.0625, std::nullopt});
    c.converged = true;
    c.iterations = 2;
    c.final_error = 0.125;
    const auto lines = lines_of(csv(c));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "m,error_true,error_estimate,bound");
    const auto first = split(lines[1]);
    REQUIRE(first.size() == 4);
    CHECK(first[0] == "1");
    CHECK(std::stod(first[1]) == 0.5);
    CHECK(std::stod(first[3]) == 1.0);
    const auto second = split(lines[2]);
    REQUIRE(second.size() == 4);
    CHECK(second[3].empty());
    CHECK(summary_line(c) == "converged=true iterations=2 final_error=1.250000000000000e-01");
  }

  TEST_CASE("fig1 at small size is deterministic and well formed") {
    ExperimentSettings s;
    s.n = 40;
    s.m_max = 15;
    const Curve a = run_fig1(s);
    const Curve b = run_fig1(s);
    CHECK(csv(a) == csv(b));
    CHECK(summary_line(a) == summary_line(b));
    const auto lines = lines_of(csv(a));
    REQUIRE(lines.size() == 16);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cells = split(lines[i]);
      REQUIRE(cells.size() == 4);
      CHECK(std::stol(cells[0]) == long(i));
      CHECK(std::isfinite(std::stod(cells[1])));
      CHECK(std::stod(cells[1]) <= std::stod(cells[3]));
    }
    s.seed = 2;
    CHECK(csv(run_fig1(s)) != csv(a));
  }

  TEST_CASE("pole strategy parsing") {
    PoleContext ctx;
    ctx.window = SpectralWindow::interval(0.1, 10.0);
    ctx.support = FunctionSpec::inv_sqrt().markov_support();
    CHECK(parse_pole_strategy("single-markov", ctx).capacity() == -1);
    const PolePlan q = parse_pole_strategy("quasi-optimal:6", ctx);
    CHECK(q.base().size() == 6);
    CHECK(q.repetition() == PolePlan::Repetition::cyclic);
    CHECK(parse_pole_strategy("polynomial", {}).at(5).is_infinite());
    const PolePlan ext = parse_pole_strategy("extended", {});
    CHECK(ext.at(0) == Pole::finite(0.0));
    CHECK(ext.at(3).is_infinite());
    PoleContext gap;
    gap.gap_lo = 0.1;
    gap.gap_hi = 1.0;
    CHECK(parse_pole_strategy("zolotarev-sign:3", gap).base().size() == 6);
    CHECK_THROWS_AS(parse_pole_strategy("zolotarev-sign:3", {}), Error);
    CHECK_THROWS_AS(parse_pole_strategy("quasi-optimal:0", ctx), Error);
    CHECK_THROWS_AS(parse_pole_strategy("quasi-optimal:x", ctx), Error);
    CHECK_THROWS_AS(parse_pole_strategy("single-markov", {}), Error);
    CHECK_THROWS_AS(parse_pole_strategy("no-such-strategy", {}), Error);

    const auto path = std::filesystem::temp_directory_path() / "rku_test_poles.txt";
    {
      std::ofstream f(path);
      f << "# two poles\n-1\n\ninf\n";
    }
    const PolePlan from_file = parse_pole_strategy("file:" + path.string(), {});
    REQUIRE(from_file.base().size() == 2);
    CHECK(from_file.at(2) == Pole::finite(-1.0));
    std::filesystem::remove(path);
  }

  TEST_CASE("custom run: estimator, true error and bound columns") {
    const UpdateProblem p = small_hermitian(202, 30);
    ExperimentSettings s;
    s.m_max = 12;
    s.tol = 0.0;
    const Curve c = run_custom(p, FunctionSpec::inv_sqrt(), "", s);
    REQUIRE(c.rows.size() == 12);
    for (const CurveRow& r : c.rows) {
      REQUIRE(r.bound.has_value());
      CHECK(r.error_true <= *r.bound);
    }
    CHECK(c.rows.back().error_true < c.rows.front().error_true);
    CHECK(csv(c) == csv(run_custom(p, FunctionSpec::inv_sqrt(), "", s)));

    // A general problem falls back to polynomial poles and has no bound.
    Gen g(203);
    const UpdateProblem gen = UpdateProblem::low_rank(g.stable(15, 1.0, 2.0), g.complex(15, 1), g.complex(15, 1));
    const Curve e = run_custom(gen, FunctionSpec::exp(), "", s);
    for (const CurveRow& r : e.rows) CHECK_FALSE(r.bound.has_value());
    CHECK(e.rows.back().error_true <= 1e-8 * e.rows.front().error_true + 1e-14);
  }

  TEST_CASE("sylvester run on a scalar equation") {
    SylvesterProblem p{Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0),
                       Matrix::Constant(1, 1, 1.0)};
    ExperimentSettings s;
    s.d = 1;
    s.tol = 1e-10;
    const SylvesterRun run = run_sylvester(p, "", s);
    CHECK(std::abs(run.result.solution()(0, 0) - Scalar(1.0 / 3.0)) <= 1e-14);
    std::ostringstream out;
    write_sylvester_csv(out, run.result);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "m,residual,galerkin,error_estimate");
    CHECK(split(lines[1]).size() == 4);
  }
}
