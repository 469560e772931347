#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "indde/analyze.hpp"
#include "indde/certify.hpp"
#include "indde/error.hpp"
#include "indde/simulate.hpp"
#include "support.hpp"

using namespace indde;
using indde::testing::example;

namespace {

std::vector<SeriesPoint> exponential(double lambda, double c) {
  std::vector<SeriesPoint> out;
  for (int k = 0; k <= 200; ++k) {
    const double t = 0.05 * k;
    out.push_back({t, c * std::exp(-lambda * t)});
  }
  return out;
}

}  // namespace

TEST_CASE("fit_decay recovers known rates") {
  for (double lambda : {0.1, 1.0, 5.0}) {
    const DecayFit f = fit_decay(exponential(lambda, 3.0), 0.0, 10.0);
    CHECK(f.lambda == doctest::Approx(lambda).epsilon(1e-9));
    CHECK(f.c == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(f.residual < 1e-9);
  }
  CHECK_THROWS_AS(fit_decay(exponential(1.0, 1.0), 0.0, 0.3), Error);
  auto tiny = exponential(10.0, 1e-12);
  CHECK_THROWS_AS(fit_decay(tiny, 2.0, 10.0), Error);
}

TEST_CASE("examples satisfy the observed definitions") {
  for (const char* name : {"ex5_1", "ex5_2"}) {
    const LoadedSpec l = example(name);
    const Trajectory traj = simulate(l.spec, l.integrator);
    const Certificate cert = certify(l.spec, ModeRequest::exponential);
    const DecayReport r = check_definitions(traj, l.spec, &cert);
    CHECK(r.decays_to_zero);
    CHECK(r.tail_norm < 1e-3 * r.history_norm);
    REQUIRE(r.fit.has_value());
    CHECK(r.fit->lambda > 0.0);
    CHECK(r.exponential_bound_holds);
    CHECK(r.lambda_bound_used > 0.0);
    CHECK(r.lambda_bound_used < r.lambda_limit);
    CHECK(r.c_bound_used <= 100.0);
  }
}

TEST_CASE("history norm") {
  const SystemSpec s = example("ex5_1").spec;
  // sup |cos| + sup |sin| on [-0.2, 0].
  CHECK(history_norm(s, -0.2) == doctest::Approx(1.0 + std::sin(0.2)).epsilon(1e-9));
}

TEST_CASE("growing trajectory fails the definitions") {
  SystemSpec s = indde::testing::scalar_decay();
  s.linear(0, 0) = Expr::constant(0.5);
  IntegratorConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 15.0;
  const DecayReport r = check_definitions(simulate(s, cfg), s);
  CHECK_FALSE(r.decays_to_zero);
  CHECK_FALSE(r.exponential_bound_holds);
}

TEST_CASE("csv round trip") {
  const LoadedSpec l = example("ex5_1");
  const Trajectory traj = simulate(l.spec, l.integrator);
  std::ostringstream os;
  const std::size_t bytes = emit_csv(traj, os);
  const std::string text = os.str();
  CHECK(bytes == text.size());
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(traj.size() + 1));

  std::istringstream is(text);
  const CsvTable table = read_csv(is);
  CHECK(table.header == std::vector<std::string>{"t", "x1", "x2", "norm1"});
  REQUIRE(table.rows.size() == traj.size());
  for (std::size_t k = 0; k < traj.size(); k += 97) {
    CHECK(table.rows[k][0] == doctest::Approx(traj.time(k)).epsilon(1e-11));
    CHECK(std::abs(table.rows[k][1] - traj.state(k)[0]) <= 1e-11 * std::abs(traj.state(k)[0]) + 1e-300);
    CHECK(std::abs(table.rows[k][3] - norm1(traj.state(k))) <= 1e-11 * norm1(traj.state(k)) + 1e-300);
  }
}

TEST_CASE("plot output") {
  const LoadedSpec l = example("ex5_1");
  const Trajectory traj = simulate(l.spec, l.integrator);
  std::filesystem::create_directories(INDDE_TEST_TMP);
  const auto path = std::filesystem::path(INDDE_TEST_TMP) / "ex5_1.svg";
  const std::size_t bytes = emit_plot(traj, path, {"ex5_1", 720, 420});
  CHECK(bytes == std::filesystem::file_size(path));
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string svg = buf.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t markers = 0;
  for (std::size_t at = svg.find("class=\"impulse\""); at != std::string::npos;
       at = svg.find("class=\"impulse\"", at + 1)) {
    ++markers;
  }
  CHECK(markers == 5);
}
