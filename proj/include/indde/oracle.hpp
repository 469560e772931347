#pragma once

#include <cstddef>
#include <vector>

#include "indde/error.hpp"
#include "indde/model.hpp"
#include "indde/simulate.hpp"

namespace indde {

/// Uniform nodes on [0, horizon] with every impulse instant in (0, horizon]
/// inserted twice (left record, right record).
std::vector<double> oracle_grid(const SystemSpec& spec, double horizon, double step);

/// One application of the integral-equation solution operator on `grid`.
/// The output shares the input's history and grid; impulse maps read the
/// input's left record at each instant.
Trajectory picard_operator(const SystemSpec& spec, const Trajectory& input,
                           const std::vector<double>& grid);

/// Sum over components of the sup-norm difference on the shared grid.
double sup_delta(const Trajectory& a, const Trajectory& b);

struct PicardReport {
  std::size_t iterations = 0;
  std::vector<double> sup_deltas;
  bool converged = false;
  Trajectory final{0, {}, 0.0, Engine::oracle, Interpolation::linear, 0.0};

  /// Geometric mean of the last `count` successive delta ratios.
  double contraction_ratio(std::size_t count = 5) const;
};

class NotConverged : public Error {
 public:
  explicit NotConverged(PicardReport report);
  const PicardReport& report() const { return report_; }

 private:
  PicardReport report_;
};

/// Starting guess: history phi, phi(0) held constant on [0, horizon].
Trajectory initial_guess(const SystemSpec& spec, const std::vector<double>& grid, double step);

/// Iterates picard_operator until the delta falls below `tol`. Throws
/// NotConverged (carrying the report) after `max_iter` sweeps or when the
/// iterates stop being finite.
PicardReport picard_solve(const SystemSpec& spec, double horizon, double grid_step, double tol,
                          std::size_t max_iter);

struct OracleConfig {
  double grid_step = 1e-2;
  double tol = 1e-6;
  std::size_t max_iter = 200;
};

struct CrosscheckReport {
  double sup_diff = 0.0;                  // sup_t ||x_sim - x_oracle||_1
  std::vector<double> component_max;      // per-component sup |difference|
  double worst_time = 0.0;
  PicardReport picard;
};

/// Runs picard_solve first, then simulate, and compares both engines at the
/// oracle nodes on [0, integrator.horizon].
CrosscheckReport crosscheck(const SystemSpec& spec, const IntegratorConfig& integrator,
                            const OracleConfig& oracle);

}  // namespace indde
