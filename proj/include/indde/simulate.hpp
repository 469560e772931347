#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "indde/model.hpp"

namespace indde {

struct IntegratorConfig {
  double step = 1e-3;
  double horizon = 10.0;
  std::size_t quad_points = 16;
  double recovery_tol = 1e-13;
  std::size_t recovery_max_iter = 200;
};

/// Throws invalid_argument for a non-positive step/horizon or zero quad points.
void check_config(const IntegratorConfig& config);

/// Drift of the neutral combination at `t` for a completed trajectory:
/// C x + A f(x) + B g(x(t - delta)) + W * trapezoid of h(x) over [t - r, t].
std::vector<double> rhs(const SystemSpec& spec, const Trajectory& history, double t,
                        std::size_t quad_points, Side side = Side::right);

/// (Fx)(t) = x(t) - Q(t) x(t - tau(t)) read off a trajectory.
std::vector<double> neutral_combination(const SystemSpec& spec, const Trajectory& traj, double t,
                                        Side side);

/// Method-of-steps integrator for y = Fx with classical RK4.
///
/// x is recovered from y at every stage through x = y + Q(t) x(t - tau(t)).
/// When the delayed argument falls inside the step being taken, that relation
/// is iterated to a fixed point with the stage value acting as a provisional
/// trajectory node.
class Integrator {
 public:
  Integrator(const SystemSpec& spec, IntegratorConfig config);

  double time() const { return trajectory_.horizon(); }
  /// Committed state x at time().
  std::span<const double> state() const { return trajectory_.state(trajectory_.size() - 1); }
  /// Integrated neutral combination y = Fx at time().
  std::span<const double> neutral_state() const { return y_; }
  const Trajectory& trajectory() const { return trajectory_; }

  /// Drift at `t` with current-time state `x_now`. For t past the committed
  /// horizon, (t, x_now) serves as the provisional node.
  std::vector<double> rhs(double t, std::span<const double> x_now);

  /// Solves x = y + Q(t) x(t - tau(t)) for x. Throws q_too_large when
  /// ||Q(t)||_inf >= 1 and recovery_diverged after recovery_max_iter sweeps.
  std::vector<double> recover_state(double t, std::span<const double> y);

  /// Advances by one RK4 step of length h and commits the new record.
  void step(double h);

  /// Applies the k-th scheduled impulse; the integrator must sit exactly on
  /// t_k. Commits the post-impulse record.
  void apply_impulse(std::size_t k);

  /// Fixed-point sweeps used by the last recover_state call (0 = direct lookup).
  std::size_t last_recovery_iterations() const { return recovery_deltas_.size(); }
  /// Successive-iterate differences of the last recover_state call.
  const std::vector<double>& last_recovery_deltas() const { return recovery_deltas_; }

  Trajectory release() && { return std::move(trajectory_); }

 private:
  void lookup(double s, std::span<double> out) const;
  void drift_into(double t, std::span<const double> x_now, std::span<double> out);
  void neutral_matrix_into(double t);

  const SystemSpec& spec_;
  IntegratorConfig config_;
  Trajectory trajectory_;
  std::vector<double> y_;

  // Provisional node inside the step being taken.
  double tail_t_ = 0.0;
  std::vector<double> tail_x_;
  bool tail_active_ = false;

  bool zero_neutral_, zero_instant_, zero_delayed_, zero_distributed_;
  std::vector<double> qbuf_, mbuf_, tmp_, tmp2_;
  std::vector<double> recovery_deltas_;
};

/// Integrates on [0, config.horizon], landing exactly on every impulse
/// instant. Any failure is rethrown as a SimulationError carrying the time.
Trajectory simulate(const SystemSpec& spec, const IntegratorConfig& config);

}  // namespace indde
