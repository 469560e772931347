#include <doctest.h>

#include <cmath>

#include "indde/certify.hpp"
#include "indde/error.hpp"
#include "support.hpp"

using namespace indde;
using indde::testing::example;

namespace {

double brute_sup(const Expr& e, double lo, double hi, std::size_t n) {
  double best = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    best = std::max(best, std::abs(e(lo + (hi - lo) * static_cast<double>(k) / n)));
  }
  return best;
}

// Trapezoid in s of exp(-int_s^t v) with the inner integral by Simpson.
double kernel_oracle(const Expr& v, double window, double step) {
  const auto cells = static_cast<std::size_t>(std::llround(window / step));
  std::vector<double> cum(cells + 1, 0.0);
  for (std::size_t k = 1; k <= cells; ++k) {
    const double a = (k - 1) * step;
    const double b = k * step;
    cum[k] = cum[k - 1] + (b - a) / 6.0 * (v(a) + 4.0 * v(0.5 * (a + b)) + v(b));
  }
  // exp(-int_s^t v) = exp(cum(s)) / exp(cum(t)); cum stays well below overflow here.
  double best = 0.0;
  double partial = 0.0;
  for (std::size_t m = 1; m <= cells; ++m) {
    partial += 0.5 * step * (std::exp(cum[m - 1]) + std::exp(cum[m]));
    best = std::max(best, partial * std::exp(-cum[m]));
  }
  return best;
}

}  // namespace

TEST_CASE("kernel_sup closed form") {
  for (double c : {1.0, 16.0, 20.0}) {
    CHECK(std::abs(kernel_sup(Expr::constant(c), 100.0, 1e-3) - 1.0 / c) < 1e-9);
  }
  CHECK_THROWS_AS(kernel_sup(Expr::constant(0.0), 100.0, 1e-3), Error);
  CHECK_THROWS_AS(kernel_sup(parse("sin(t)"), 10.0, 1e-3), Error);
}

TEST_CASE("kernel_sup numeric path") {
  const Expr v = parse("16 + sin(t)");
  const double engine = kernel_sup(v, 20.0, 1e-3);
  const double oracle = kernel_oracle(v, 20.0, 1e-4);
  CHECK(std::abs(engine - oracle) < 1e-6);
  CHECK(engine > 1.0 / 17.0);
  CHECK(engine < 1.0 / 15.0);
}

TEST_CASE("ex5_1 terms by hand") {
  const SystemSpec s = example("ex5_1").spec;
  const Certificate cert = certify(s, ModeRequest::exponential);
  REQUIRE(cert.rows.size() == 2);
  const double k = 1.0 / 16.0;
  // Row sums from the matrices: |cbar|, |b beta|, |w mu gamma|, |q v|, p.
  const double row1 = 0.1 + (2.5 + 0.3 + 0.2 * 0.2 + 0.1 * 16 + 0.8) * k;
  const double row2 = 0.1 + (1.5 + 0.4 + 0.5 * 0.2 + 0.1 * 16 + 0.8) * k;
  CHECK(std::abs(cert.rows[0].contribution - row1) < 1e-6);
  CHECK(std::abs(cert.rows[1].contribution - row2) < 1e-6);
  CHECK(std::abs(cert.rho - (row1 + row2)) < 1e-6);
  CHECK(cert.rho < 1.0);
  CHECK(cert.certified());
  CHECK(cert.mode == CertMode::exponential);
  CHECK(cert.lambda_max == doctest::Approx(16.0));
  CHECK(cert.reference_rho == doctest::Approx(0.7925));
  CHECK_FALSE(cert.notes.empty());
  CHECK(cert.rows[0].kernel_sup == k);
}

TEST_CASE("ex5_2 against brute-force suprema") {
  const SystemSpec s = example("ex5_2").spec;
  const Certificate cert = certify(s, ModeRequest::exponential);
  const double k = 1.0 / 20.0;
  const double lo = s.theta_floor;
  const double hi = s.window.t_max;
  const std::size_t n = 1'000'000;
  const double c12 = 0.5773502691896258;

  const double b11 = brute_sup(parse("0.999*cos(t)*sin(2*t)"), lo, hi, n) * 0.6;
  const double b21 = 0.999 * 0.6;
  const double q1 = 0.125;
  const double q2 = 0.2;
  const double a1 = brute_sup(parse("0.01/(1 + t)"), lo, hi, n) * 0.4;
  const double a2 = brute_sup(parse("0.01*exp(-t)"), lo, hi, n) * 0.4;

  const double row1 = q1 + (std::max(2.0, c12) + a1 + b11 + q1 * 20 + 0.8) * k;
  const double row2 = q2 + (std::max(c12, 0.0) + a2 + b21 + q2 * 20 + 0.8) * k;
  CHECK(std::abs(cert.rows[0].contribution - row1) < 1e-4);
  CHECK(std::abs(cert.rows[1].contribution - row2) < 1e-4);
  CHECK(std::abs(cert.rho - (row1 + row2)) < 1e-4);
  CHECK(cert.rho < 1.0);
  CHECK(cert.lambda_max == doctest::Approx(20.0));
}

TEST_CASE("automatic mode and delay boundedness") {
  const SystemSpec s = example("ex5_1").spec;
  CHECK(delays_bounded(s));
  CHECK(certify(s, ModeRequest::automatic).mode == CertMode::exponential);

  SystemSpec growing = s;
  growing.neutral_delay = parse("0.1*t");
  CHECK_FALSE(delays_bounded(growing));
  const Certificate c = certify(growing, ModeRequest::automatic);
  CHECK(c.mode == CertMode::asymptotic);
  CHECK_FALSE(c.lambda_max.has_value());
}

TEST_CASE("failing conditions are reported") {
  SystemSpec big = indde::testing::scale_neutral(example("ex5_1").spec, 10.0);
  const Certificate c = certify(big, ModeRequest::asymptotic);
  CHECK(c.rho > 1.0);
  CHECK_FALSE(c.certified());
  bool iv_fails = false;
  for (const auto& cond : c.conditions) {
    if (cond.label == "(iv)") iv_fails = !cond.holds;
  }
  CHECK(iv_fails);

  SystemSpec greedy = example("ex5_1").spec;
  greedy.impulses.lipschitz[0][2] = 5.0;
  CHECK_FALSE(certify(greedy, ModeRequest::asymptotic).certified());
}

TEST_CASE("corollary equals asymptotic without impulse rates") {
  const SystemSpec stripped = strip_impulses(example("ex5_1").spec);
  const Certificate a = certify_corollary(stripped);
  const Certificate b = certify_asymptotic(stripped);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].contribution == b.rows[i].contribution);
    CHECK(b.rows[i].impulse_rate == 0.0);
  }
  CHECK(a.rho == b.rho);
  CHECK_THROWS_AS(certify_corollary(example("ex5_1").spec), Error);
}

TEST_CASE("estimated constants are flagged") {
  SystemSpec s = example("ex5_1").spec;
  s.estimated_constants = true;
  const Certificate c = certify(s, ModeRequest::asymptotic);
  CHECK_FALSE(c.rigorous_constants);
}
