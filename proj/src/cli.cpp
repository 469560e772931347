#include "indde/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "indde/certify.hpp"
#include "indde/specfile.hpp"

namespace indde {

namespace {

std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

ModeRequest parse_mode(const std::string& mode) {
  if (mode == "asym") return ModeRequest::asymptotic;
  if (mode == "exp") return ModeRequest::exponential;
  return ModeRequest::automatic;
}

}  // namespace

std::string certificate_block(const Certificate& cert) {
  std::ostringstream os;
  os << "mode=" << to_string(cert.mode) << "\n";
  os << "rho=" << g10(cert.rho) << "\n";
  if (cert.reference_rho) os << "rho_reference=" << g10(*cert.reference_rho) << "\n";
  for (std::size_t i = 0; i < cert.rows.size(); ++i) {
    const RowTerms& r = cert.rows[i];
    const std::string p = "row_" + std::to_string(i + 1) + "_";
    os << "K_" << i + 1 << "=" << g10(r.kernel_sup) << "\n";
    os << p << "neutral=" << g10(r.neutral_sup) << "\n";
    os << p << "linear=" << g10(r.linear_sup) << "\n";
    os << p << "instant=" << g10(r.instant_sup) << "\n";
    os << p << "delayed=" << g10(r.delayed_sup) << "\n";
    os << p << "distributed=" << g10(r.distributed_sup) << "\n";
    os << p << "neutral_aux=" << g10(r.neutral_aux_sup) << "\n";
    os << p << "impulse=" << g10(r.impulse_rate) << "\n";
    os << p << "contribution=" << g10(r.contribution) << "\n";
  }
  for (const auto& c : cert.conditions) {
    std::string label = c.label;
    label.erase(std::remove(label.begin(), label.end(), '('), label.end());
    label.erase(std::remove(label.begin(), label.end(), ')'), label.end());
    os << "condition_" << label << "=" << (c.holds ? "holds" : "fails") << "\n";
  }
  os << "mu=" << g10(cert.delay_bound) << "\n";
  os << "sup_window=" << g10(cert.window) << "\n";
  os << "sup_step=" << g10(cert.grid_step) << "\n";
  if (cert.lambda_max) os << "lambda_max=" << g10(*cert.lambda_max) << "\n";
  os << "rigorous_constants=" << (cert.rigorous_constants ? "yes" : "no") << "\n";
  os << "verdict=" << (cert.certified() ? "certified" : "not_certified") << "\n";
  return os.str();
}

std::string render_certificate(const Certificate& cert, const std::string& name) {
  std::ostringstream os;
  os << "Certificate for " << (name.empty() ? "<unnamed>" : name) << " (" << to_string(cert.mode)
     << " test)\n";
  for (const auto& c : cert.conditions) {
    os << "  " << c.label << (c.label.size() < 4 ? "  " : " ") << (c.holds ? "holds " : "FAILS ")
       << c.detail << "\n";
  }
  for (std::size_t i = 0; i < cert.rows.size(); ++i) {
    const RowTerms& r = cert.rows[i];
    os << "  row " << i + 1 << ": q " << g10(r.neutral_sup) << ", cbar " << g10(r.linear_sup)
       << ", a*alpha " << g10(r.instant_sup) << ", b*beta " << g10(r.delayed_sup)
       << ", w*mu*gamma " << g10(r.distributed_sup) << ", q*v " << g10(r.neutral_aux_sup)
       << ", p " << g10(r.impulse_rate) << ", K " << g10(r.kernel_sup) << " -> "
       << g10(r.contribution) << "\n";
  }
  os << "  rho (recomputed) = " << g10(cert.rho) << (cert.rho < 1.0 ? " < 1" : " >= 1") << "\n";
  if (cert.reference_rho) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *cert.reference_rho);
    os << "  rho (published)  = " << buf << "\n";
  }
  if (cert.certified()) {
    os << "  verdict: certified "
       << (cert.mode == CertMode::exponential ? "globally exponentially stable"
                                              : "asymptotically stable");
    if (cert.lambda_max) os << " for every decay rate lambda < " << g10(*cert.lambda_max);
    os << "\n";
  } else {
    os << "  verdict: not certified\n";
  }
  for (const auto& note : cert.notes) os << "  note: " << note << "\n";
  os << "\n" << certificate_block(cert);
  return os.str();
}

std::string decay_block(const DecayReport& r) {
  std::ostringstream os;
  os << "horizon=" << g10(r.horizon) << "\n";
  os << "tail_norm=" << g10(r.tail_norm) << "\n";
  os << "history_norm=" << g10(r.history_norm) << "\n";
  if (r.fit) {
    os << "lambda_fit=" << g10(r.fit->lambda) << "\n";
    os << "c_fit=" << g10(r.fit->c) << "\n";
    os << "fit_residual=" << g10(r.fit->residual) << "\n";
  } else {
    os << "lambda_fit=n/a\n";
  }
  os << "decays_to_zero=" << (r.decays_to_zero ? "yes" : "no") << "\n";
  os << "exponential_bound_holds=" << (r.exponential_bound_holds ? "yes" : "no") << "\n";
  if (r.exponential_bound_holds) {
    os << "lambda_bound_used=" << g10(r.lambda_bound_used) << "\n";
    os << "c_bound_used=" << g10(r.c_bound_used) << "\n";
  }
  os << "lambda_limit=" << g10(r.lambda_limit) << "\n";
  return os.str();
}

std::string crosscheck_block(const CrosscheckReport& r, double tol) {
  std::ostringstream os;
  os << "sup_diff=" << g10(r.sup_diff) << "\n";
  os << "worst_time=" << g10(r.worst_time) << "\n";
  for (std::size_t i = 0; i < r.component_max.size(); ++i) {
    os << "component_" << i + 1 << "_max=" << g10(r.component_max[i]) << "\n";
  }
  os << "picard_iterations=" << r.picard.iterations << "\n";
  os << "picard_last_delta="
     << (r.picard.sup_deltas.empty() ? std::string("n/a") : g10(r.picard.sup_deltas.back()))
     << "\n";
  os << "picard_ratio=" << g10(r.picard.contraction_ratio()) << "\n";
  os << "tol=" << g10(tol) << "\n";
  os << "agree=" << (r.sup_diff < tol ? "yes" : "no") << "\n";
  return os.str();
}

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

int cmd_certify(Context& ctx, const std::string& path, const std::string& mode,
                const std::string& report, std::optional<double> window) {
  LoadedSpec l = load(path);
  for (const auto& w : l.warnings) ctx.err << "warning: " << w << "\n";
  if (window) l.spec.window.t_max = *window;
  const Certificate cert = certify(l.spec, parse_mode(mode));
  const std::string text = render_certificate(cert, l.spec.name);
  ctx.out << text;
  if (!report.empty()) write_text(report, text);
  return cert.certified() ? exit_code::ok : exit_code::not_certified;
}

int cmd_simulate(Context& ctx, const std::string& path, std::optional<double> horizon,
                 std::optional<double> step, const std::string& csv, const std::string& plot) {
  LoadedSpec l = load(path);
  for (const auto& w : l.warnings) ctx.err << "warning: " << w << "\n";
  if (horizon) set_horizon(l, *horizon);
  if (step) l.integrator.step = *step;
  Trajectory traj = [&] {
    try {
      return simulate(l.spec, l.integrator);
    } catch (const SimulationError& e) {
      ctx.err << "integration failed at t=" << g10(e.time()) << ": " << e.what() << "\n";
      throw;
    }
  }();
  const DecayReport report = check_definitions(traj, l.spec);
  ctx.out << "Simulated " << (l.spec.name.empty() ? path : l.spec.name) << " on [0, "
          << g10(l.integrator.horizon) << "] with step " << g10(l.integrator.step) << " ("
          << traj.size() << " records, " << l.spec.impulses.count() << " impulses)\n";
  ctx.out << "  tail norm ||x(T)||_1 = " << g10(report.tail_norm) << "\n";
  if (report.fit) ctx.out << "  fitted decay rate = " << g10(report.fit->lambda) << "\n";
  ctx.out << "  decay to zero observed on [0, T]: " << (report.decays_to_zero ? "yes" : "no")
          << "\n";
  ctx.out << "  exponential bound observed on [0, T]: "
          << (report.exponential_bound_holds ? "yes" : "no") << "\n\n";
  ctx.out << decay_block(report);
  if (!csv.empty()) {
    const std::size_t bytes = emit_csv(traj, std::filesystem::path(csv));
    ctx.out << "csv=" << csv << "\ncsv_bytes=" << bytes << "\n";
  }
  if (!plot.empty()) {
    PlotOptions opts;
    opts.title = l.spec.name.empty() ? "trajectory" : l.spec.name;
    const std::size_t bytes = emit_plot(traj, std::filesystem::path(plot), opts);
    ctx.out << "plot=" << plot << "\nplot_bytes=" << bytes << "\n";
  }
  return exit_code::ok;
}

int cmd_crosscheck(Context& ctx, const std::string& path, std::optional<double> horizon,
                   double tol) {
  LoadedSpec l = load(path);
  for (const auto& w : l.warnings) ctx.err << "warning: " << w << "\n";
  if (horizon) set_horizon(l, *horizon);
  CrosscheckReport report;
  try {
    report = crosscheck(l.spec, l.integrator, l.oracle);
  } catch (const NotConverged& e) {
    const auto& r = e.report();
    ctx.err << e.what() << "\n";
    ctx.out << "picard_iterations=" << r.iterations << "\npicard_converged=no\n";
    ctx.out << "picard_ratio=" << g10(r.contraction_ratio()) << "\n";
    return exit_code::oracle;
  }
  ctx.out << "Crosscheck of " << (l.spec.name.empty() ? path : l.spec.name) << " on [0, "
          << g10(l.integrator.horizon) << "]: integrator step " << g10(l.integrator.step)
          << ", oracle grid " << g10(l.oracle.grid_step) << ", Picard tol " << g10(l.oracle.tol)
          << "\n";
  ctx.out << "  sup difference " << g10(report.sup_diff) << " at t=" << g10(report.worst_time)
          << (report.sup_diff < tol ? " (below " : " (NOT below ") << g10(tol) << ")\n";
  ctx.out << "  Picard converged in " << report.picard.iterations << " sweeps; deltas:";
  for (double d : report.picard.sup_deltas) ctx.out << " " << g10(d);
  ctx.out << "\n  mean contraction ratio (last 5) " << g10(report.picard.contraction_ratio())
          << "\n\n";
  ctx.out << crosscheck_block(report, tol);
  return report.sup_diff < tol ? exit_code::ok : exit_code::oracle;
}

int cmd_example(Context& ctx, const std::string& name, const std::string& emit) {
  const auto text = builtin_example(name);
  if (!text) {
    ctx.err << "unknown example '" << name << "'; available:";
    for (const auto& n : builtin_names()) ctx.err << " " << n;
    ctx.err << "\n";
    return exit_code::usage;
  }
  LoadedSpec l = parse_spec(*text);
  const Certificate cert = certify(l.spec, ModeRequest::automatic);
  if (!emit.empty()) {
    std::filesystem::create_directories(emit);
    const auto path = std::filesystem::path(emit) / (name + ".spec");
    write_text(path, std::string(*text));
    ctx.out << "wrote " << path.string() << "\n";
  }
  char published[32] = "n/a";
  if (cert.reference_rho) std::snprintf(published, sizeof published, "%.4f", *cert.reference_rho);
  ctx.out << name << ": published rho " << published << ", recomputed rho " << g10(cert.rho)
          << "\n";
  ctx.out << "rho_reference=" << published << "\nrho=" << g10(cert.rho) << "\nverdict="
          << (cert.certified() ? "certified" : "not_certified") << "\n";
  return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability certificates, simulation and cross-validation for impulsive neutral "
               "delay systems"};
  app.require_subcommand(1);

  std::string path, mode = "auto", report, csv, plot, name, emit;
  std::optional<double> window, horizon, step;
  double tol = 5e-3;

  auto* certify_cmd = app.add_subcommand("certify", "Evaluate the contraction certificate");
  certify_cmd->add_option("spec", path, "Problem file")->required();
  certify_cmd->add_option("--mode", mode, "asym, exp or auto")
      ->check(CLI::IsMember({"asym", "exp", "auto"}));
  certify_cmd->add_option("--report", report, "Write the report to this file");
  certify_cmd->add_option("--window", window, "Sup window length")->check(CLI::PositiveNumber);

  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the system");
  simulate_cmd->add_option("spec", path, "Problem file")->required();
  simulate_cmd->add_option("--horizon", horizon, "End time")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--step", step, "Integrator step")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--csv", csv, "Write the trajectory as CSV");
  simulate_cmd->add_option("--plot", plot, "Write an SVG plot");

  auto* cross_cmd = app.add_subcommand("crosscheck", "Compare the integrator with the Picard oracle");
  cross_cmd->add_option("spec", path, "Problem file")->required();
  cross_cmd->add_option("--horizon", horizon, "End time")->check(CLI::PositiveNumber);
  cross_cmd->add_option("--tol", tol, "Agreement tolerance")->check(CLI::PositiveNumber);

  auto* example_cmd = app.add_subcommand("example", "Print or write a built-in problem");
  example_cmd->add_option("name", name, "ex5_1 or ex5_2")->required();
  example_cmd->add_option("--emit", emit, "Directory to write <name>.spec into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  Context ctx{out, err};
  try {
    if (*certify_cmd) return cmd_certify(ctx, path, mode, report, window);
    if (*simulate_cmd) return cmd_simulate(ctx, path, horizon, step, csv, plot);
    if (*cross_cmd) return cmd_crosscheck(ctx, path, horizon, tol);
    if (*example_cmd) return cmd_example(ctx, name, emit);
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::integration;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::oracle;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}

}  // namespace indde
