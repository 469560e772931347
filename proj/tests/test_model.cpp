#include <doctest.h>

#include <cmath>

#include "indde/error.hpp"
#include "indde/model.hpp"
#include "support.hpp"

using namespace indde;
using indde::testing::example;

namespace {

bool has_violation(const std::vector<Violation>& v, const std::string& label,
                   const std::string& fragment = "") {
  for (const auto& x : v) {
    if (x.assumption == label && x.detail.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("built-in examples validate") {
  CHECK(validate(example("ex5_1").spec).empty());
  CHECK(validate(example("ex5_2").spec).empty());
}

TEST_CASE("validate reports assumption labels") {
  SystemSpec s = example("ex5_1").spec;

  SystemSpec bad_g = s;
  bad_g.delayed_act[0] = parse("x + 1");
  CHECK(has_violation(validate(bad_g), "A2", "g_1(0)"));

  SystemSpec repeated = s;
  repeated.impulses.instants = {1.0, 1.0};
  for (auto& row : repeated.impulses.maps) row.resize(2, parse("arctan(0.4*x)"));
  for (auto& row : repeated.impulses.lipschitz) row.resize(2, 0.4);
  CHECK(has_violation(validate(repeated), "impulses", "not strictly increasing"));

  SystemSpec bad_eta = s;
  bad_eta.aux_floor[1] = -1.0;
  CHECK(has_violation(validate(bad_eta), "(iii)", "requires eta_2 > 0"));

  SystemSpec low_v = s;
  low_v.aux[0] = parse("16 + sin(t)");
  CHECK(has_violation(validate(low_v), "(iii)", "falls below eta_1"));

  SystemSpec negative_delay = s;
  negative_delay.discrete_delay = parse("sin(t)");
  CHECK(has_violation(validate(negative_delay), "A1", "delta"));

  SystemSpec bad_map = s;
  bad_map.impulses.maps[0][0] = parse("x + 0.5");
  CHECK(has_violation(validate(bad_map), "A3"));

  SystemSpec greedy = s;
  greedy.impulses.lipschitz[0][0] = 10.0;
  CHECK(has_violation(validate(greedy), "(ii)"));

  SystemSpec zero = SystemSpec::zero(3);
  CHECK(validate(zero).empty());
}

TEST_CASE("theta") {
  CHECK(theta(example("ex5_1").spec) == doctest::Approx(-0.2));
  CHECK(theta(SystemSpec::zero(2)) == 0.0);
  // t - 0.2|sin t| >= 0.8 t on t >= 0, so the infimum is attained at t = 0.
  CHECK(theta(example("ex5_2").spec) == 0.0);
  SystemSpec s = SystemSpec::zero(1);
  s.neutral_delay = parse("0.3");
  s.window_delay = parse("0.7");
  CHECK(theta(s) == doctest::Approx(-0.7));
}

TEST_CASE("trajectory records and evaluation") {
  SystemSpec s = example("ex5_1").spec;
  Trajectory traj(2, s.history, -0.2, Engine::integrator, Interpolation::cubic, 0.1);
  const auto h = traj.eval_at(-0.5 + 0.4);
  CHECK(h[0] == doctest::Approx(std::cos(-0.1)).epsilon(1e-14));
  CHECK(h[1] == doctest::Approx(std::sin(-0.1)).epsilon(1e-14));
  CHECK_THROWS_AS(traj.eval_at(-0.3), Error);

  // Smooth samples of e^{-t} on [0, 1], then a jump at 1.
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    const double v[] = {std::exp(-t), 2 * std::exp(-t)};
    traj.push(t, v);
  }
  const double jumped[] = {5.0, 6.0};
  traj.push(1.0, jumped);
  const double after[] = {5.5, 6.5};
  traj.push(1.1, after);

  CHECK(traj.is_left_record(10));
  CHECK_FALSE(traj.is_left_record(11));
  CHECK(traj.impulse_times() == std::vector<double>{1.0});
  CHECK(traj.eval_at(1.0, Side::left)[0] == std::exp(-1.0));
  CHECK(traj.eval_at(1.0, Side::right)[0] == 5.0);
  CHECK(traj.eval_at(0.3)[1] == doctest::Approx(2 * std::exp(-0.3)).epsilon(1e-14));
  CHECK(traj.eval_at(0.55, Side::left) == traj.eval_at(0.55, Side::right));
  CHECK(std::abs(traj.eval_at(0.55)[0] - std::exp(-0.55)) < 1e-5);
  CHECK(traj.eval_at(1.05)[0] == doctest::Approx(5.25));
  CHECK_THROWS_AS(traj.eval_at(1.2), Error);

  const double third[] = {0.0, 0.0};
  CHECK_THROWS_AS(traj.push(1.05, third), Error);
}

TEST_CASE("cubic interpolation error is fourth order") {
  auto max_error = [](double h) {
    Trajectory traj(1, {parse("exp(-t)")}, 0.0, Engine::integrator, Interpolation::cubic, h);
    for (int k = 0; k * h <= 1.0 + 1e-12; ++k) {
      const double v[] = {std::exp(-k * h)};
      traj.push(k * h, v);
    }
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = 0.001 * k + 0.0005;
      worst = std::max(worst, std::abs(traj.eval_at(t)[0] - std::exp(-t)));
    }
    return worst;
  };
  const double coarse = max_error(0.1);
  const double fine = max_error(0.05);
  CHECK(coarse < 1e-5);
  CHECK(coarse / fine > 12.0);
}

TEST_CASE("strip_impulses and norm1") {
  SystemSpec s = strip_impulses(example("ex5_1").spec);
  CHECK(s.impulses.empty());
  CHECK(validate(s).empty());
  const double v[] = {-1.0, 2.0, -3.0};
  CHECK(norm1(v) == 6.0);
}

TEST_CASE("generated instants follow the recurrence") {
  const auto inst = generate_instants(parse("0.5*k"), std::nullopt, 10.0);
  const std::vector<double> expected = {0.5, 1.5, 3.0, 5.0, 7.5};
  CHECK(inst == expected);
  CHECK(generate_instants(parse("0.5*k"), 7, 0.0).size() == 7);
  CHECK(generate_instants(parse("0.5*k"), 7, 0.0).back() == doctest::Approx(14.0));
}
