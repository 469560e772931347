#include "indde/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "indde/error.hpp"

namespace indde {

namespace {

double eval_t(const Expr& e, double t) {
  return e.is_constant() ? e.constant_value() : e.eval(Var::t, t);
}

// Shared drift evaluation; `lookup(s, out)` yields x(s) for s < t.
template <typename Lookup>
void drift(const SystemSpec& s, double t, std::span<const double> x_now, Lookup&& lookup,
           std::size_t quad_points, std::span<double> out, std::vector<double>& mat,
           std::vector<double>& buf, std::vector<double>& buf2) {
  const std::size_t n = s.dim;
  mat.resize(n * n);
  buf.resize(n);
  buf2.resize(n);
  std::fill(out.begin(), out.end(), 0.0);

  s.linear.eval_into(t, mat);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += mat[i * n + j] * x_now[j];

  if (!s.instant.is_zero()) {
    s.instant.eval_into(t, mat);
    for (std::size_t j = 0; j < n; ++j) buf[j] = s.instant_act[j].eval(Var::x, x_now[j]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += mat[i * n + j] * buf[j];
  }

  if (!s.delayed.is_zero()) {
    const double d = eval_t(s.discrete_delay, t);
    if (d > 0.0) {
      lookup(t - d, std::span<double>(buf2));
    } else {
      std::copy(x_now.begin(), x_now.end(), buf2.begin());
    }
    s.delayed.eval_into(t, mat);
    for (std::size_t j = 0; j < n; ++j) buf[j] = s.delayed_act[j].eval(Var::x, buf2[j]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += mat[i * n + j] * buf[j];
  }

  if (!s.distributed.is_zero()) {
    const double r = eval_t(s.window_delay, t);
    std::fill(buf.begin(), buf.end(), 0.0);
    if (r > 0.0) {
      const double h = r / static_cast<double>(quad_points);
      for (std::size_t m = 0; m <= quad_points; ++m) {
        const double w = (m == 0 || m == quad_points) ? 0.5 * h : h;
        if (m == quad_points) {
          std::copy(x_now.begin(), x_now.end(), buf2.begin());
        } else {
          lookup(t - r + static_cast<double>(m) * h, std::span<double>(buf2));
        }
        for (std::size_t j = 0; j < n; ++j) buf[j] += w * s.distributed_act[j].eval(Var::x, buf2[j]);
      }
    }
    s.distributed.eval_into(t, mat);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += mat[i * n + j] * buf[j];
  }
}

double row_sum_norm(std::span<const double> mat, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(mat[i * n + j]);
    best = std::max(best, row);
  }
  return best;
}

}  // namespace

void check_config(const IntegratorConfig& c) {
  if (!(c.step > 0.0) || !std::isfinite(c.step)) {
    throw Error(ErrorCode::invalid_argument, "integrator step must be positive");
  }
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
    throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  }
  if (c.quad_points == 0) throw Error(ErrorCode::invalid_argument, "quad_points must be >= 1");
  if (!(c.recovery_tol > 0.0) || c.recovery_max_iter == 0) {
    throw Error(ErrorCode::invalid_argument, "recovery tolerance and iteration cap must be positive");
  }
}

std::vector<double> rhs(const SystemSpec& spec, const Trajectory& history, double t,
                        std::size_t quad_points, Side side) {
  std::vector<double> x_now = history.eval_at(t, side);
  std::vector<double> out(spec.dim), mat, buf, buf2;
  auto lookup = [&](double s, std::span<double> o) { history.eval_into(s, Side::right, o); };
  drift(spec, t, x_now, lookup, quad_points, out, mat, buf, buf2);
  return out;
}

std::vector<double> neutral_combination(const SystemSpec& spec, const Trajectory& traj, double t,
                                        Side side) {
  const std::size_t n = spec.dim;
  std::vector<double> x = traj.eval_at(t, side);
  if (spec.neutral.is_zero()) return x;
  const double tau = eval_t(spec.neutral_delay, t);
  std::vector<double> z = traj.eval_at(t - tau, tau > 0.0 ? Side::right : side);
  std::vector<double> q(n * n);
  spec.neutral.eval_into(t, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] -= q[i * n + j] * z[j];
  return x;
}

// ---------------------------------------------------------------------------

Integrator::Integrator(const SystemSpec& spec, IntegratorConfig config)
    : spec_(spec),
      config_(config),
      trajectory_(spec.dim, spec.history, std::min(spec.theta_floor, 0.0), Engine::integrator,
                  Interpolation::cubic, config.step),
      y_(spec.dim),
      tail_x_(spec.dim),
      zero_neutral_(spec.neutral.is_zero()),
      zero_instant_(spec.instant.is_zero()),
      zero_delayed_(spec.delayed.is_zero()),
      zero_distributed_(spec.distributed.is_zero()),
      qbuf_(spec.dim * spec.dim),
      tmp_(spec.dim),
      tmp2_(spec.dim) {
  check_config(config_);
  const std::size_t n = spec.dim;
  std::vector<double> x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = spec.history[i].eval(Var::t, 0.0);

  // y(0) = phi(0) - Q(0) phi(-tau(0)).
  y_ = x0;
  if (!zero_neutral_) {
    neutral_matrix_into(0.0);
    const double tau = eval_t(spec.neutral_delay, 0.0);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = spec.history[j].eval(Var::t, -tau);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y_[i] -= qbuf_[i * n + j] * tmp_[j];
  }
  trajectory_.push(0.0, x0);
}

void Integrator::lookup(double s, std::span<double> out) const {
  if (tail_active_) {
    trajectory_.eval_ahead(s, out, tail_t_, tail_x_);
  } else {
    trajectory_.eval_ahead(s, out, 0.0, {});
  }
}

void Integrator::neutral_matrix_into(double t) {
  spec_.neutral.eval_into(t, qbuf_);
  const double norm = row_sum_norm(qbuf_, spec_.dim);
  if (!(norm < 1.0)) {
    throw SimulationError(ErrorCode::q_too_large,
                          "neutral matrix row-sum norm " + std::to_string(norm) + " >= 1", t);
  }
}

void Integrator::drift_into(double t, std::span<const double> x_now, std::span<double> out) {
  const bool ahead = t > trajectory_.horizon();
  if (ahead) {
    tail_t_ = t;
    std::copy(x_now.begin(), x_now.end(), tail_x_.begin());
    tail_active_ = true;
  }
  auto look = [this](double s, std::span<double> o) { lookup(s, o); };
  drift(spec_, t, x_now, look, config_.quad_points, out, mbuf_, tmp_, tmp2_);
  tail_active_ = false;
}

std::vector<double> Integrator::rhs(double t, std::span<const double> x_now) {
  std::vector<double> out(spec_.dim);
  drift_into(t, x_now, out);
  return out;
}

std::vector<double> Integrator::recover_state(double t, std::span<const double> y) {
  const std::size_t n = spec_.dim;
  recovery_deltas_.clear();
  std::vector<double> x(y.begin(), y.end());
  if (zero_neutral_) return x;

  neutral_matrix_into(t);
  const double tau = eval_t(spec_.neutral_delay, t);
  const double s = t - tau;
  std::vector<double> z(n);
  auto apply = [&](std::vector<double>& into) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = y[i];
      for (std::size_t j = 0; j < n; ++j) acc += qbuf_[i * n + j] * z[j];
      into[i] = acc;
    }
  };

  if (s <= trajectory_.horizon()) {
    lookup(s, z);
    apply(x);
    return x;
  }

  // Delayed argument inside the open step: iterate with (t, x) as tail node.
  trajectory_.eval_ahead(t, x, 0.0, {});
  std::vector<double> next(n);
  for (std::size_t it = 0; it < config_.recovery_max_iter; ++it) {
    trajectory_.eval_ahead(s, z, t, x);
    apply(next);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - x[i]));
    x.swap(next);
    recovery_deltas_.push_back(diff);
    if (diff < config_.recovery_tol) return x;
  }
  throw SimulationError(ErrorCode::recovery_diverged,
                        "neutral-term recovery did not converge in " +
                            std::to_string(config_.recovery_max_iter) + " sweeps",
                        t);
}

void Integrator::step(double h) {
  const std::size_t n = spec_.dim;
  const double t = time();
  const std::vector<double> x0(state().begin(), state().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);

  drift_into(t, x0, k1);

  for (std::size_t i = 0; i < n; ++i) stage[i] = y_[i] + 0.5 * h * k1[i];
  std::vector<double> xs = recover_state(t + 0.5 * h, stage);
  drift_into(t + 0.5 * h, xs, k2);

  for (std::size_t i = 0; i < n; ++i) stage[i] = y_[i] + 0.5 * h * k2[i];
  xs = recover_state(t + 0.5 * h, stage);
  drift_into(t + 0.5 * h, xs, k3);

  for (std::size_t i = 0; i < n; ++i) stage[i] = y_[i] + h * k3[i];
  xs = recover_state(t + h, stage);
  drift_into(t + h, xs, k4);

  for (std::size_t i = 0; i < n; ++i) {
    y_[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const std::vector<double> x1 = recover_state(t + h, y_);
  trajectory_.push(t + h, x1);
}

void Integrator::apply_impulse(std::size_t k) {
  const auto& imp = spec_.impulses;
  if (k >= imp.count()) throw Error(ErrorCode::invalid_argument, "impulse index out of range");
  const double tk = imp.instants[k];
  if (time() != tk) {
    throw SimulationError(ErrorCode::invalid_argument, "integrator is not at the impulse instant",
                          time());
  }
  const std::size_t n = spec_.dim;
  const std::vector<double> left(state().begin(), state().end());
  for (std::size_t i = 0; i < n; ++i) y_[i] += imp.maps[i][k].eval(Var::x, left[i]);

  std::vector<double> right = y_;
  if (!zero_neutral_) {
    const double tau = eval_t(spec_.neutral_delay, tk);
    if (!(tau > 0.0)) {
      throw SimulationError(ErrorCode::impulse_delay_collision,
                            "neutral delay vanishes at an impulse instant", tk);
    }
    neutral_matrix_into(tk);
    std::vector<double> z(n);
    lookup(tk - tau, z);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) right[i] += qbuf_[i * n + j] * z[j];
  }
  trajectory_.push(tk, right);
}

Trajectory simulate(const SystemSpec& spec, const IntegratorConfig& config) {
  check_config(config);
  Integrator integ(spec, config);
  const double h = config.step;
  const double horizon = config.horizon;
  const double snap = 1e-9 * h;

  const auto& instants = spec.impulses.instants;
  std::size_t next_impulse = 0;
  const auto nominal = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
  std::size_t m = 1;
  double t = 0.0;
  try {
    while (t < horizon) {
      double target = m >= nominal ? horizon : static_cast<double>(m) * h;
      bool is_impulse = false;
      if (next_impulse < instants.size() && instants[next_impulse] <= target + snap) {
        if (instants[next_impulse] >= target - snap) ++m;
        target = instants[next_impulse];
        is_impulse = true;
      } else {
        ++m;
      }
      if (target - t > snap) integ.step(target - t);
      t = integ.time();
      if (is_impulse) {
        integ.apply_impulse(next_impulse);
        ++next_impulse;
      }
    }
  } catch (const SimulationError&) {
    throw;
  } catch (const Error& e) {
    throw SimulationError(e.code(), e.what(), integ.time());
  }
  return std::move(integ).release();
}

}  // namespace indde
