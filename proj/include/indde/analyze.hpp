#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "indde/model.hpp"

namespace indde {

struct SeriesPoint {
  double t;
  double value;
};

/// ||x(t)||_1 per record; at an impulse instant only the right record is kept.
std::vector<SeriesPoint> norm_series(const Trajectory& traj);

struct DecayFit {
  double lambda = 0.0;
  double c = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit
  std::size_t points = 0;
};

/// Least squares of log value against t over [window_start, window_end],
/// skipping values below 1e-14. Throws too_few_points with fewer than 10.
DecayFit fit_decay(const std::vector<SeriesPoint>& series, double window_start,
                   double window_end);

/// sum_i sup over [theta, 0] of |phi_i|.
double history_norm(const SystemSpec& spec, double theta, double step = 1e-3);

struct DefinitionOptions {
  double decay_tol = 1e-3;
  double c_cap = 100.0;
  std::size_t lambda_grid = 100;
  double fit_start_fraction = 0.2;
};

struct DecayReport {
  std::optional<DecayFit> fit;
  double tail_norm = 0.0;
  double history_norm = 0.0;
  bool decays_to_zero = false;
  bool exponential_bound_holds = false;
  /// Decay rate and prefactor that witnessed the bound (largest admissible
  /// rate on the scan grid with C <= c_cap).
  double lambda_bound_used = 0.0;
  double c_bound_used = 0.0;
  double lambda_limit = 0.0;  // min_i eta_i
  double horizon = 0.0;
};

/// Observed-on-[0, T] verdicts for asymptotic decay and the exponential bound.
DecayReport check_definitions(const Trajectory& traj, const SystemSpec& spec,
                              const Certificate* certificate = nullptr,
                              const DefinitionOptions& options = {});

/// Writes `t,x1,...,xn,norm1` rows with 12 significant digits; impulse
/// instants appear twice. Returns the number of bytes written.
std::size_t emit_csv(const Trajectory& traj, std::ostream& out);
std::size_t emit_csv(const Trajectory& traj, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

struct PlotOptions {
  std::string title;
  double width = 720.0;
  double height = 420.0;
};

/// Standalone SVG of every component against time, with dashed markers at
/// the impulse instants. Returns the number of bytes written.
std::size_t emit_plot(const Trajectory& traj, std::ostream& out, const PlotOptions& options = {});
std::size_t emit_plot(const Trajectory& traj, const std::filesystem::path& path,
                      const PlotOptions& options = {});

}  // namespace indde
