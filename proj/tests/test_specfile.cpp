#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "indde/error.hpp"
#include "indde/specfile.hpp"

using namespace indde;

namespace {

const char* kMinimal = R"spec(# scalar test system
[system]
n = 1
name = "scalar"

[matrix.C]
1 1 = "-1"

[auxiliary]
v = "1"
eta = 0.5

[history]
phi1 = "exp(-t)"
)spec";

std::size_t error_line(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecFileError& e) {
    return e.line();
  }
  FAIL("expected a spec-file error");
  return 0;
}

void same_spec(const SystemSpec& a, const SystemSpec& b) {
  REQUIRE(a.dim == b.dim);
  CHECK(a.name == b.name);
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t j = 0; j < a.dim; ++j) {
      CHECK(a.neutral(i, j) == b.neutral(i, j));
      CHECK(a.linear(i, j) == b.linear(i, j));
      CHECK(a.instant(i, j) == b.instant(i, j));
      CHECK(a.delayed(i, j) == b.delayed(i, j));
      CHECK(a.distributed(i, j) == b.distributed(i, j));
    }
    CHECK(a.instant_act[i] == b.instant_act[i]);
    CHECK(a.delayed_act[i] == b.delayed_act[i]);
    CHECK(a.distributed_act[i] == b.distributed_act[i]);
    CHECK(a.instant_lip[i] == b.instant_lip[i]);
    CHECK(a.delayed_lip[i] == b.delayed_lip[i]);
    CHECK(a.distributed_lip[i] == b.distributed_lip[i]);
    CHECK(a.aux[i] == b.aux[i]);
    CHECK(a.aux_floor[i] == b.aux_floor[i]);
    CHECK(a.history[i] == b.history[i]);
  }
  CHECK(a.neutral_delay == b.neutral_delay);
  CHECK(a.discrete_delay == b.discrete_delay);
  CHECK(a.window_delay == b.window_delay);
  CHECK(a.delay_bound == b.delay_bound);
  CHECK(a.impulses.instants == b.impulses.instants);
  CHECK(a.impulses.lipschitz == b.impulses.lipschitz);
  CHECK(a.impulses.row_rate == b.impulses.row_rate);
  CHECK(a.history_lo == b.history_lo);
  CHECK(a.theta_floor == b.theta_floor);
  CHECK(a.reference_rho == b.reference_rho);
}

}  // namespace

TEST_CASE("minimal file") {
  const LoadedSpec l = parse_spec(kMinimal);
  CHECK(l.spec.dim == 1);
  CHECK(l.spec.name == "scalar");
  CHECK(l.spec.linear(0, 0).constant_value() == -1.0);
  CHECK(l.spec.impulses.empty());
  CHECK(l.integrator.horizon == 10.0);
}

TEST_CASE("examples round-trip through serialize") {
  for (const auto& name : builtin_names()) {
    const LoadedSpec a = parse_spec(*builtin_example(name));
    const LoadedSpec b = parse_spec(serialize(a));
    same_spec(a.spec, b.spec);
    CHECK(a.integrator.horizon == b.integrator.horizon);
    CHECK(a.integrator.step == b.integrator.step);
    CHECK(serialize(b) == serialize(a));
  }
  CHECK_FALSE(builtin_example("ex9_9").has_value());
}

TEST_CASE("example contents") {
  const LoadedSpec l = parse_spec(*builtin_example("ex5_1"));
  const std::vector<double> expected = {0.5, 1.5, 3.0, 5.0, 7.5};
  CHECK(l.spec.impulses.instants == expected);
  CHECK(l.spec.theta_floor == doctest::Approx(-0.2));
  CHECK(l.spec.delay_bound == 0.2);
  CHECK(l.warnings.empty());
  CHECK_FALSE(l.spec.estimated_constants);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("[system]\nn = 1\n[bogus]\n") == 3);
  CHECK(error_line("[system]\nn = 1\nwat = 2\n") == 3);
  CHECK(error_line("[system]\nn = 1\n[matrix.C]\n1 1 = \"sin(\"\n") == 4);
  CHECK(error_line("[system]\nn = 1\n[matrix.C]\n3 1 = \"1\"\n") == 4);
  CHECK(error_line("n = 1\n") == 1);
  CHECK(error_line("[system]\nn = 1\nn = 2\n") == 3);
  CHECK(error_line("[system]\nn = 1\n\n\n[impulses]\ninstants = [1, 2\n") == 6);
  CHECK(error_line("[system]\nn = 1\n[delays]\ntau = \"x\"\n") == 4);
}

TEST_CASE("validation failures are reported") {
  std::string text = kMinimal;
  text += "[nonlinearities]\ng = \"x + 1\"\nbeta = 1\n";
  try {
    parse_spec(text);
    FAIL("no error");
  } catch (const ValidationError& e) {
    REQUIRE_FALSE(e.violations().empty());
    CHECK(e.violations().front().assumption == "A2");
  }
}

TEST_CASE("missing constants are estimated and flagged") {
  std::string text = kMinimal;
  text += "[nonlinearities]\nf = \"0.2*tanh(2*x)\"\n";
  const LoadedSpec l = parse_spec(text);
  CHECK(l.estimated.count("alpha1") == 1);
  CHECK(l.spec.instant_lip[0] == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(l.spec.estimated_constants);
  CHECK_FALSE(l.warnings.empty());
}

TEST_CASE("generator with a count and derived rates") {
  std::string text = kMinimal;
  text += "[impulses]\ngenerator = \"t_{k-1} + 1\"\ncount = 3\nmap = \"0.5*x\"\np_ik = 0.5\n";
  const LoadedSpec l = parse_spec(text);
  CHECK(l.spec.impulses.instants == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(l.spec.impulses.row_rate[0] == doctest::Approx(0.5));
  CHECK(l.estimated.count("p_i1") == 1);
}

TEST_CASE("set_horizon re-expands generated instants") {
  LoadedSpec l = parse_spec(*builtin_example("ex5_1"));
  set_horizon(l, 20.0);
  CHECK(l.integrator.horizon == 20.0);
  CHECK(l.spec.impulses.instants.back() == doctest::Approx(18.0));
  set_horizon(l, 2.0);
  CHECK(l.spec.impulses.instants == std::vector<double>{0.5, 1.5});
}

TEST_CASE("load from disk") {
  std::filesystem::create_directories(INDDE_TEST_TMP);
  const auto path = std::filesystem::path(INDDE_TEST_TMP) / "minimal.spec";
  std::ofstream(path) << kMinimal;
  CHECK(load(path).spec.name == "scalar");
  CHECK_THROWS_AS(load(std::filesystem::path(INDDE_TEST_TMP) / "nope.spec"), Error);
}
