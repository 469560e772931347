#include "indde/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace indde {

namespace {

double eval_t(const Expr& e, double t) {
  return e.is_constant() ? e.constant_value() : e.eval(Var::t, t);
}

Trajectory empty_trajectory(const SystemSpec& spec, double step) {
  return Trajectory(spec.dim, spec.history, std::min(spec.theta_floor, 0.0), Engine::oracle,
                    Interpolation::linear, step);
}

bool left_record(const std::vector<double>& grid, std::size_t m) {
  return m + 1 < grid.size() && grid[m + 1] == grid[m];
}

double nominal_step(const std::vector<double>& grid) {
  double best = 0.0;
  for (std::size_t m = 1; m < grid.size(); ++m) best = std::max(best, grid[m] - grid[m - 1]);
  return best;
}

}  // namespace

std::vector<double> oracle_grid(const SystemSpec& spec, double horizon, double step) {
  if (!(step > 0.0) || !(horizon > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "oracle grid needs a positive step and horizon");
  }
  const double snap = 1e-9 * step;
  const auto cells = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  std::vector<double> grid;
  grid.reserve(cells + 1 + 2 * spec.impulses.count());
  for (std::size_t m = 0; m <= cells; ++m) {
    grid.push_back(m == cells ? horizon : static_cast<double>(m) * step);
  }
  for (double tk : spec.impulses.instants) {
    if (tk > horizon + snap) break;
    auto it = std::lower_bound(grid.begin(), grid.end(), tk - snap);
    if (it != grid.end() && std::abs(*it - tk) <= snap) {
      *it = tk;
      grid.insert(it, tk);
    } else {
      grid.insert(it, 2, tk);
    }
  }
  return grid;
}

Trajectory initial_guess(const SystemSpec& spec, const std::vector<double>& grid, double step) {
  Trajectory out = empty_trajectory(spec, step);
  std::vector<double> x0(spec.dim);
  for (std::size_t i = 0; i < spec.dim; ++i) x0[i] = spec.history[i].eval(Var::t, 0.0);
  for (double t : grid) out.push(t, x0);
  return out;
}

Trajectory picard_operator(const SystemSpec& spec, const Trajectory& input,
                           const std::vector<double>& grid) {
  const std::size_t n = spec.dim;
  const std::size_t nodes = grid.size();
  if (input.size() != nodes) {
    throw Error(ErrorCode::invalid_argument, "input trajectory is not on the operator grid");
  }
  const double step = nominal_step(grid);

  // Cumulative integral of v_i at the nodes.
  std::vector<double> vcum(nodes * n, 0.0);
  std::vector<double> vnode(nodes * n);
  for (std::size_t m = 0; m < nodes; ++m) {
    for (std::size_t i = 0; i < n; ++i) vnode[m * n + i] = eval_t(spec.aux[i], grid[m]);
  }
  for (std::size_t m = 1; m < nodes; ++m) {
    const double dt = grid[m] - grid[m - 1];
    for (std::size_t i = 0; i < n; ++i) {
      vcum[m * n + i] =
          vcum[(m - 1) * n + i] + 0.5 * dt * (vnode[(m - 1) * n + i] + vnode[m * n + i]);
    }
  }

  // Jumps from the input's left records.
  struct Jump {
    std::size_t node;  // index of the left record
    std::vector<double> value;
  };
  std::vector<Jump> jumps;
  {
    std::size_t k = 0;
    for (std::size_t m = 0; m + 1 < nodes; ++m) {
      if (!left_record(grid, m)) continue;
      while (k < spec.impulses.count() && spec.impulses.instants[k] < grid[m]) ++k;
      if (k >= spec.impulses.count() || spec.impulses.instants[k] != grid[m]) {
        throw Error(ErrorCode::invalid_argument, "duplicated grid node is not an impulse instant");
      }
      Jump j{m, std::vector<double>(n)};
      auto left = input.state(m);
      for (std::size_t i = 0; i < n; ++i) j.value[i] = spec.impulses.maps[i][k].eval(Var::x, left[i]);
      jumps.push_back(std::move(j));
      ++k;
    }
  }

  std::vector<double> q0(n * n), q(n * n), c(n * n), a(n * n), b(n * n), w(n * n);
  spec.neutral.eval_into(0.0, q0);
  std::vector<double> s2(n);
  {
    const double tau0 = eval_t(spec.neutral_delay, 0.0);
    std::vector<double> phi0(n), phi_tau(n);
    for (std::size_t j = 0; j < n; ++j) {
      phi0[j] = spec.history[j].eval(Var::t, 0.0);
      phi_tau[j] = spec.history[j].eval(Var::t, -tau0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      s2[i] = phi0[i];
      for (std::size_t j = 0; j < n; ++j) s2[i] -= q0[i * n + j] * phi_tau[j];
    }
  }

  Matrix cbar_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cbar_matrix(i, j) = i == j ? Expr::sum(spec.linear(i, i), spec.aux[i]) : spec.linear(i, j);

  const bool has_neutral = !spec.neutral.is_zero();
  const bool has_instant = !spec.instant.is_zero();
  const bool has_delayed = !spec.delayed.is_zero();
  const bool has_distributed = !spec.distributed.is_zero();

  std::vector<double> s1(nodes * n, 0.0), g(nodes * n, 0.0);
  std::vector<double> xd(n), xq(n), hint(n), buf(n);
  for (std::size_t m = 0; m < nodes; ++m) {
    const double t = grid[m];
    const Side side = left_record(grid, m) ? Side::left : Side::right;
    auto x = input.state(m);
    double* gm = g.data() + m * n;

    cbar_matrix.eval_into(t, c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gm[i] += c[i * n + j] * x[j];

    if (has_neutral) {
      const double tau = eval_t(spec.neutral_delay, t);
      input.eval_into(t - tau, tau > 0.0 ? Side::right : side, xd);
      spec.neutral.eval_into(t, q);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += q[i * n + j] * xd[j];
        s1[m * n + i] = acc;
        gm[i] -= vnode[m * n + i] * acc;
      }
    }
    if (has_instant) {
      spec.instant.eval_into(t, a);
      for (std::size_t j = 0; j < n; ++j) buf[j] = spec.instant_act[j].eval(Var::x, x[j]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gm[i] += a[i * n + j] * buf[j];
    }
    if (has_delayed) {
      const double d = eval_t(spec.discrete_delay, t);
      input.eval_into(t - d, d > 0.0 ? Side::right : side, xd);
      spec.delayed.eval_into(t, b);
      for (std::size_t j = 0; j < n; ++j) buf[j] = spec.delayed_act[j].eval(Var::x, xd[j]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gm[i] += b[i * n + j] * buf[j];
    }
    if (has_distributed) {
      const double r = eval_t(spec.window_delay, t);
      std::fill(hint.begin(), hint.end(), 0.0);
      if (r > 0.0) {
        const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(r / step - 1e-9)));
        const double h = r / static_cast<double>(cells);
        for (std::size_t p = 0; p <= cells; ++p) {
          const double wgt = (p == 0 || p == cells) ? 0.5 * h : h;
          if (p == cells) {
            std::copy(x.begin(), x.end(), xq.begin());
          } else {
            input.eval_into(t - r + static_cast<double>(p) * h, Side::right, xq);
          }
          for (std::size_t j = 0; j < n; ++j) hint[j] += wgt * spec.distributed_act[j].eval(Var::x, xq[j]);
        }
      }
      spec.distributed.eval_into(t, w);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gm[i] += w[i * n + j] * hint[j];
    }
  }

  Trajectory out = empty_trajectory(spec, input.step());
  std::vector<double> s4(n, 0.0), xnew(n);
  for (std::size_t m = 0; m < nodes; ++m) {
    if (m > 0) {
      const double dt = grid[m] - grid[m - 1];
      for (std::size_t i = 0; i < n; ++i) {
        const double decay = std::exp(-(vcum[m * n + i] - vcum[(m - 1) * n + i]));
        s4[i] = s4[i] * decay + 0.5 * dt * (g[(m - 1) * n + i] * decay + g[m * n + i]);
      }
    }
    const bool is_left = left_record(grid, m);
    for (std::size_t i = 0; i < n; ++i) {
      double s3 = 0.0;
      for (const Jump& j : jumps) {
        if (j.node > m || (j.node == m && is_left)) break;
        s3 += j.value[i] * std::exp(-(vcum[m * n + i] - vcum[j.node * n + i]));
      }
      xnew[i] = s1[m * n + i] + s2[i] * std::exp(-vcum[m * n + i]) + s3 + s4[i];
    }
    out.push(grid[m], xnew);
  }
  return out;
}

double sup_delta(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw Error(ErrorCode::invalid_argument, "trajectories are not on a shared grid");
  }
  std::vector<double> sup(a.dim(), 0.0);
  for (std::size_t m = 0; m < a.size(); ++m) {
    auto x = a.state(m);
    auto y = b.state(m);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double d = std::abs(x[i] - y[i]);
      if (!(d <= sup[i])) sup[i] = d;  // propagates NaN
    }
  }
  double total = 0.0;
  for (double s : sup) total += s;
  return total;
}

double PicardReport::contraction_ratio(std::size_t count) const {
  if (sup_deltas.size() < 2 || count == 0) return 0.0;
  const std::size_t ratios = std::min(count, sup_deltas.size() - 1);
  double log_sum = 0.0;
  for (std::size_t k = sup_deltas.size() - ratios; k < sup_deltas.size(); ++k) {
    const double prev = sup_deltas[k - 1];
    const double cur = sup_deltas[k];
    if (prev == 0.0) return 0.0;
    if (cur == 0.0) return 0.0;
    log_sum += std::log(cur / prev);
  }
  return std::exp(log_sum / static_cast<double>(ratios));
}

NotConverged::NotConverged(PicardReport report)
    : Error(ErrorCode::not_converged,
            "Picard iteration did not converge after " + std::to_string(report.iterations) +
                " sweeps (last delta " +
                (report.sup_deltas.empty() ? std::string("n/a")
                                           : std::to_string(report.sup_deltas.back())) +
                ")"),
      report_(std::move(report)) {}

PicardReport picard_solve(const SystemSpec& spec, double horizon, double grid_step, double tol,
                          std::size_t max_iter) {
  if (!(tol > 0.0) || max_iter == 0) {
    throw Error(ErrorCode::invalid_argument, "Picard tolerance and iteration cap must be positive");
  }
  const std::vector<double> grid = oracle_grid(spec, horizon, grid_step);
  PicardReport report;
  Trajectory current = initial_guess(spec, grid, grid_step);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Trajectory next = picard_operator(spec, current, grid);
    const double delta = sup_delta(next, current);
    report.sup_deltas.push_back(delta);
    report.iterations = it;
    current = std::move(next);
    if (!std::isfinite(delta)) break;
    if (delta < tol) {
      report.converged = true;
      break;
    }
  }
  report.final = std::move(current);
  if (!report.converged) throw NotConverged(std::move(report));
  return report;
}

CrosscheckReport crosscheck(const SystemSpec& spec, const IntegratorConfig& integrator,
                            const OracleConfig& oracle) {
  CrosscheckReport out;
  out.picard = picard_solve(spec, integrator.horizon, oracle.grid_step, oracle.tol,
                            oracle.max_iter);
  const Trajectory sim = simulate(spec, integrator);
  const Trajectory& ref = out.picard.final;
  out.component_max.assign(spec.dim, 0.0);
  std::vector<double> xs(spec.dim);
  for (std::size_t m = 0; m < ref.size(); ++m) {
    const double t = ref.time(m);
    sim.eval_into(t, ref.is_left_record(m) ? Side::left : Side::right, xs);
    auto xo = ref.state(m);
    double total = 0.0;
    for (std::size_t i = 0; i < spec.dim; ++i) {
      const double d = std::abs(xs[i] - xo[i]);
      out.component_max[i] = std::max(out.component_max[i], d);
      total += d;
    }
    if (total > out.sup_diff) {
      out.sup_diff = total;
      out.worst_time = t;
    }
  }
  return out;
}

}  // namespace indde
