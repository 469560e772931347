#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "indde/analyze.hpp"
#include "indde/certify.hpp"
#include "indde/cli.hpp"
#include "indde/error.hpp"
#include "indde/oracle.hpp"
#include "indde/simulate.hpp"
#include "support.hpp"

using namespace indde;
using indde::testing::example;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double brute_sup(const Expr& e, double lo, double hi, std::size_t n) {
  double best = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    best = std::max(best, std::abs(e(lo + (hi - lo) * static_cast<double>(k) / n)));
  }
  return best;
}

bool published_rho_reported(const Certificate& cert, const char* value) {
  const std::string text = render_certificate(cert, "");
  return text.find(std::string("rho_reference=") + value) != std::string::npos;
}

void certificate_ex5_1(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const SystemSpec s = example("ex5_1").spec;
  const Certificate cert = certify(s, ModeRequest::automatic);
  const double elapsed = seconds_since(start);
  const double k = 1.0 / 16.0;
  const double hand = (0.1 + (2.5 + 0.3 + 0.2 * 0.2 + 0.1 * 16 + 0.8) * k) +
                      (0.1 + (1.5 + 0.4 + 0.5 * 0.2 + 0.1 * 16 + 0.8) * k);
  o.detail << "published 0.7925, recomputed " << cert.rho << ", hand " << hand << ", "
           << elapsed << " s";
  o.require(published_rho_reported(cert, "0.7925"), "published rho reported");
  o.require(std::abs(cert.rho - hand) < 1e-6, "hand oracle within 1e-6");
  o.require(cert.rho < 1.0, "rho < 1");
  o.require(elapsed < 1.0, "runtime < 1 s");
}

void certificate_ex5_2(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const SystemSpec s = example("ex5_2").spec;
  const Certificate cert = certify(s, ModeRequest::automatic);
  const double elapsed = seconds_since(start);
  const double k = 1.0 / 20.0;
  const double lo = s.theta_floor;
  const double hi = s.window.t_max;
  const std::size_t n = 2'000'000;
  const double b11 = brute_sup(parse("0.999*cos(t)*sin(2*t)"), lo, hi, n) * 0.6;
  const double b22 = brute_sup(parse("0.999*cos(t)^2"), lo, hi, n) * 0.6;
  const double a11 = brute_sup(parse("0.01/(1 + t)"), lo, hi, n) * 0.4;
  const double a22 = brute_sup(parse("0.01*exp(-t)"), lo, hi, n) * 0.4;
  const double q1 = brute_sup(parse("sin(t)^3/8"), lo, hi, n);
  const double q2 = brute_sup(parse("0.2*sin(t)"), lo, hi, n);
  const double c12 = 0.5773502691896258;
  const double hand = (q1 + (std::max(2.0, c12) + a11 + b11 + q1 * 20 + 0.8) * k) +
                      (q2 + (c12 + a22 + b22 + q2 * 20 + 0.8) * k);
  o.detail << "published 0.8832, recomputed " << cert.rho << ", brute force " << hand << ", "
           << elapsed << " s";
  o.require(published_rho_reported(cert, "0.8832"), "published rho reported");
  o.require(std::abs(cert.rho - hand) < 1e-4, "brute-force oracle within 1e-4");
  o.require(cert.rho < 1.0, "rho < 1");
  o.require(elapsed < 1.0, "runtime < 1 s");
}

void kernel_check(Outcome& o) {
  double worst = 0.0;
  for (double c : {1.0, 16.0, 20.0}) {
    worst = std::max(worst, std::abs(kernel_sup(Expr::constant(c), 100.0, 1e-3) - 1.0 / c));
  }
  // Double quadrature on a 10x finer grid: Simpson for the inner integral,
  // trapezoid in s, maximised over t.
  const Expr v = parse("16 + sin(t)");
  const double window = 20.0;
  const double fine = 1e-4;
  const auto cells = static_cast<std::size_t>(std::llround(window / fine));
  std::vector<double> cum(cells + 1, 0.0);
  for (std::size_t m = 1; m <= cells; ++m) {
    const double a = (m - 1) * fine, b = m * fine;
    cum[m] = cum[m - 1] + fine / 6.0 * (v(a) + 4.0 * v(0.5 * (a + b)) + v(b));
  }
  double oracle = 0.0;
  double partial = 0.0;
  for (std::size_t m = 1; m <= cells; ++m) {
    partial += 0.5 * fine * (std::exp(cum[m - 1]) + std::exp(cum[m]));
    oracle = std::max(oracle, partial * std::exp(-cum[m]));
  }
  const double engine = kernel_sup(v, window, 1e-3);
  o.detail << "closed-form error " << worst << ", numeric " << engine << " vs oracle " << oracle;
  o.require(worst < 1e-9, "constant v within 1e-9");
  o.require(std::abs(engine - oracle) < 1e-6, "numeric path within 1e-6");
}

double decay_error(double step) {
  IntegratorConfig cfg;
  cfg.step = step;
  cfg.horizon = 1.0;
  const Trajectory traj = simulate(indde::testing::scalar_decay(), cfg);
  return std::abs(traj.state(traj.size() - 1)[0] - std::exp(-1.0));
}

void integrator_order(Outcome& o) {
  const double coarse = decay_error(1e-2);
  const double fine = decay_error(5e-3);
  o.detail << "error " << coarse << " at h=1e-2, ratio " << coarse / fine;
  o.require(coarse < 1e-8, "terminal error < 1e-8");
  o.require(coarse / fine >= 12.0, "halving ratio >= 12");
}

void oracle_equivalence(Outcome& o) {
  for (const char* name : {"ex5_1", "ex5_2"}) {
    LoadedSpec l = example(name);
    set_horizon(l, 5.0);
    l.integrator.step = 1e-3;
    l.oracle = OracleConfig{1e-2, 1e-6, 200};
    const auto start = std::chrono::steady_clock::now();
    const CrosscheckReport r = crosscheck(l.spec, l.integrator, l.oracle);
    const double elapsed = seconds_since(start);
    o.detail << name << " sup diff " << r.sup_diff << " (" << elapsed << " s); ";
    o.require(r.sup_diff < 5e-3, std::string(name) + " sup diff < 5e-3");
    o.require(elapsed < 30.0, std::string(name) + " runtime < 30 s");
  }
}

void contraction_rate(Outcome& o) {
  const LoadedSpec l = example("ex5_1");
  const double rho = certify(l.spec, ModeRequest::exponential).rho;
  const PicardReport r = picard_solve(l.spec, 5.0, 1e-2, 1e-6, 200);
  const double ratio = r.contraction_ratio();
  o.detail << "ratio " << ratio << " vs rho " << rho << "; ";
  o.require(ratio <= rho + 0.1, "ratio <= rho + 0.1");

  const SystemSpec scaled = indde::testing::scale_neutral(l.spec, 10.0);
  const double scaled_rho = certify(scaled, ModeRequest::exponential).rho;
  bool diverged = false;
  std::size_t sweeps = 0;
  try {
    sweeps = picard_solve(scaled, 5.0, 1e-2, 1e-6, 50).iterations;
  } catch (const NotConverged& e) {
    diverged = true;
    sweeps = e.report().iterations;
  }
  o.detail << "Q x10: rho " << scaled_rho << ", Picard "
           << (diverged ? "not converged after " : "converged in ") << sweeps << " sweeps";
  o.require(scaled_rho > 1.0, "Q x10 has rho > 1");
  o.require(diverged, "Q x10 Picard fails within 50 sweeps");
}

void decay_reproduction(Outcome& o) {
  for (const char* name : {"ex5_1", "ex5_2"}) {
    LoadedSpec l = example(name);
    set_horizon(l, 10.0);
    const Trajectory traj = simulate(l.spec, l.integrator);
    const Certificate cert = certify(l.spec, ModeRequest::exponential);
    const DecayReport r = check_definitions(traj, l.spec, &cert);
    o.detail << name << " tail " << r.tail_norm << ", lambda fit "
             << (r.fit ? r.fit->lambda : 0.0) << ", bound lambda " << r.lambda_bound_used
             << " C " << r.c_bound_used << "; ";
    o.require(r.tail_norm < 1e-3 * r.history_norm, std::string(name) + " tail norm");
    o.require(r.fit && r.fit->lambda > 0.0, std::string(name) + " fitted rate > 0");
    o.require(r.exponential_bound_holds && r.lambda_bound_used > 0.0 &&
                  r.lambda_bound_used < r.lambda_limit && r.c_bound_used <= 100.0,
              std::string(name) + " exponential bound");
  }
}

void zero_invariant(Outcome& o) {
  for (const char* name : {"ex5_1", "ex5_2"}) {
    LoadedSpec l = example(name);
    set_horizon(l, 10.0);
    const Trajectory traj = simulate(indde::testing::zero_history(l.spec), l.integrator);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      for (double v : traj.state(k)) worst = std::max(worst, std::abs(v));
    }
    o.detail << name << " max |x| " << worst << "; ";
    o.require(worst < 1e-12, std::string(name) + " zero trajectory");
  }
}

void jump_consistency(Outcome& o) {
  LoadedSpec l = example("ex5_1");
  set_horizon(l, 10.0);
  const Trajectory traj = simulate(l.spec, l.integrator);
  double worst = 0.0;
  const auto instants = traj.impulse_times();
  for (double tk : instants) {
    const auto left = traj.eval_at(tk, Side::left);
    const auto before = neutral_combination(l.spec, traj, tk, Side::left);
    const auto after = neutral_combination(l.spec, traj, tk, Side::right);
    for (std::size_t i = 0; i < left.size(); ++i) {
      worst = std::max(worst, std::abs((after[i] - before[i]) - std::atan(0.4 * left[i])));
    }
  }
  o.detail << instants.size() << " instants, max mismatch " << worst;
  o.require(instants.size() == l.spec.impulses.count(), "every instant visited");
  o.require(worst < 1e-9, "jump within 1e-9");
}

void corollary_consistency(Outcome& o) {
  const SystemSpec stripped = strip_impulses(example("ex5_1").spec);
  const Certificate a = certify_corollary(stripped);
  const Certificate b = certify_asymptotic(stripped);
  bool equal = a.rows.size() == b.rows.size() && a.rho == b.rho;
  for (std::size_t i = 0; equal && i < a.rows.size(); ++i) {
    const RowTerms& x = a.rows[i];
    const RowTerms& y = b.rows[i];
    equal = x.neutral_sup == y.neutral_sup && x.linear_sup == y.linear_sup &&
            x.instant_sup == y.instant_sup && x.delayed_sup == y.delayed_sup &&
            x.distributed_sup == y.distributed_sup && x.neutral_aux_sup == y.neutral_aux_sup &&
            x.impulse_rate == 0.0 && y.impulse_rate == 0.0 && x.kernel_sup == y.kernel_sup &&
            x.contribution == y.contribution;
  }
  o.detail << "rho " << a.rho << " vs " << b.rho;
  o.require(equal, "term-for-term equality");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"certificate ex5_1", certificate_ex5_1},
      {"certificate ex5_2", certificate_ex5_2},
      {"kernel analytic and numeric", kernel_check},
      {"integrator order", integrator_order},
      {"oracle equivalence", oracle_equivalence},
      {"contraction rate", contraction_rate},
      {"decay reproduction", decay_reproduction},
      {"zero-solution invariant", zero_invariant},
      {"jump consistency", jump_consistency},
      {"corollary consistency", corollary_consistency},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
