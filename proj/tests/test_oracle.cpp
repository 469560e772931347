#include <doctest.h>

#include <cmath>

#include "indde/certify.hpp"
#include "indde/error.hpp"
#include "indde/oracle.hpp"
#include "support.hpp"

using namespace indde;
using indde::testing::example;

TEST_CASE("oracle grid duplicates impulse instants") {
  const SystemSpec s = example("ex5_1").spec;
  const auto grid = oracle_grid(s, 2.0, 0.1);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(2.0));
  CHECK(std::count(grid.begin(), grid.end(), 0.5) == 2);
  CHECK(std::count(grid.begin(), grid.end(), 1.5) == 2);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.size() == 21 + 2);
}

TEST_CASE("scalar decay fixed point") {
  const SystemSpec s = indde::testing::scalar_decay();
  const PicardReport r = picard_solve(s, 1.0, 1e-3, 1e-10, 200);
  CHECK(r.converged);
  const double end = r.final.eval_at(1.0)[0];
  CHECK(std::abs(end - std::exp(-1.0)) < 1e-6);
  // With v = 1 the variation-of-constants kernel leaves x' = -x exact, so
  // the first sweep already reproduces the solution up to quadrature error.
  CHECK(r.iterations <= 3);
}

TEST_CASE("impulse toy through the operator") {
  SystemSpec s = SystemSpec::zero(1);
  s.history[0] = Expr::constant(1.0);
  s.impulses.instants = {1.0};
  s.impulses.maps = {{parse("0.5*x")}};
  s.impulses.lipschitz = {{0.5}};
  s.impulses.row_rate = {0.5};
  const PicardReport r = picard_solve(s, 2.0, 1e-2, 1e-12, 200);
  CHECK(r.converged);
  const double left = r.final.eval_at(1.0, Side::left)[0];
  const double right = r.final.eval_at(1.0, Side::right)[0];
  CHECK(std::abs(left - 1.0) < 1e-4);
  CHECK(std::abs(right - 1.5 * left) < 1e-9);
  CHECK(std::abs(r.final.eval_at(2.0)[0] - 1.5) < 1e-4);
}

TEST_CASE("ex5_1 contraction ratio is bounded by rho") {
  const LoadedSpec l = example("ex5_1");
  const PicardReport r = picard_solve(l.spec, 5.0, 1e-2, 1e-6, 200);
  CHECK(r.converged);
  const double rho = certify(l.spec, ModeRequest::exponential).rho;
  CHECK(r.contraction_ratio() <= rho + 0.1);
  CHECK(r.sup_deltas.size() == r.iterations);
}

TEST_CASE("not converged carries the report") {
  const LoadedSpec l = example("ex5_1");
  try {
    picard_solve(l.spec, 5.0, 1e-2, 1e-14, 3);
    FAIL("no error");
  } catch (const NotConverged& e) {
    CHECK(e.code() == ErrorCode::not_converged);
    CHECK(e.report().iterations == 3);
    CHECK_FALSE(e.report().converged);
  }
}

TEST_CASE("crosscheck agrees with the integrator") {
  for (const char* name : {"ex5_1", "ex5_2"}) {
    LoadedSpec l = example(name);
    set_horizon(l, 5.0);
    const CrosscheckReport r = crosscheck(l.spec, l.integrator, l.oracle);
    CHECK_MESSAGE(r.sup_diff < 5e-3, name);
    CHECK(r.component_max.size() == 2);
    CHECK(r.picard.converged);
  }
}

TEST_CASE("sup_delta") {
  const SystemSpec s = indde::testing::scalar_decay();
  const auto grid = oracle_grid(s, 1.0, 0.1);
  const Trajectory a = initial_guess(s, grid, 0.1);
  const Trajectory b = picard_operator(s, a, grid);
  CHECK(sup_delta(a, a) == 0.0);
  CHECK(sup_delta(a, b) > 0.0);
  CHECK(b.size() == a.size());
}
