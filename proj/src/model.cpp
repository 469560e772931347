#include "indde/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "indde/error.hpp"

namespace indde {

namespace {

constexpr double kZeroTol = 1e-12;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Lagrange interpolation through up to four nodes.
void lagrange(std::span<const double> ts, std::span<const double* const> ys, double t,
              std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < ts.size(); ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < ts.size(); ++b) {
      if (b != a) w *= (t - ts[b]) / (ts[a] - ts[b]);
    }
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * ys[a][i];
  }
}

}  // namespace

bool Matrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Expr& e) { return e.is_zero(); });
}

void Matrix::eval_into(double t, std::span<double> out) const {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    out[k] = entries_[k].is_constant() ? entries_[k].constant_value()
                                       : entries_[k].eval(Var::t, t);
  }
}

std::vector<double> generate_instants(const Expr& increment, std::optional<std::size_t> count,
                                      double cover) {
  std::vector<double> out;
  double t = 0.0;
  constexpr std::size_t kHardLimit = 1'000'000;
  for (std::size_t k = 1; k <= kHardLimit; ++k) {
    if (count && out.size() >= *count) break;
    const double dt = increment.eval(Var::k, static_cast<double>(k));
    if (!(dt > 0.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "impulse generator increment must be positive (k=" + std::to_string(k) + ")");
    }
    t += dt;
    if (!count && t > cover) break;
    out.push_back(t);
  }
  return out;
}

SystemSpec SystemSpec::zero(std::size_t n) {
  SystemSpec s;
  s.name = "zero";
  s.dim = n;
  s.neutral = s.linear = s.instant = s.delayed = s.distributed = Matrix(n);
  s.instant_act.assign(n, Expr());
  s.delayed_act.assign(n, Expr());
  s.distributed_act.assign(n, Expr());
  s.instant_lip.assign(n, 0.0);
  s.delayed_lip.assign(n, 0.0);
  s.distributed_lip.assign(n, 0.0);
  s.aux.assign(n, Expr::constant(1.0));
  s.aux_floor.assign(n, 0.5);
  s.history.assign(n, Expr());
  s.history_lo = -1.0;
  return s;
}

std::vector<Violation> validate(const SystemSpec& s) {
  std::vector<Violation> out;
  auto report = [&](std::string label, std::string detail) {
    out.push_back({std::move(label), std::move(detail)});
  };
  const std::size_t n = s.dim;
  if (n == 0) {
    report("dim", "dimension must be positive");
    return out;
  }

  const std::pair<const char*, const Matrix*> matrices[] = {
      {"Q", &s.neutral}, {"C", &s.linear}, {"A", &s.instant},
      {"B", &s.delayed}, {"W", &s.distributed}};
  for (const auto& [name, m] : matrices) {
    if (m->size() != n) report("dim", std::string("matrix ") + name + " is not " +
                                          std::to_string(n) + "x" + std::to_string(n));
  }
  auto check_len = [&](const char* name, std::size_t len) {
    if (len != n) {
      report("dim", std::string(name) + " has " + std::to_string(len) + " entries, expected " +
                        std::to_string(n));
    }
  };
  check_len("f", s.instant_act.size());
  check_len("g", s.delayed_act.size());
  check_len("h", s.distributed_act.size());
  check_len("alpha", s.instant_lip.size());
  check_len("beta", s.delayed_lip.size());
  check_len("gamma", s.distributed_lip.size());
  check_len("v", s.aux.size());
  check_len("eta", s.aux_floor.size());
  check_len("phi", s.history.size());
  if (!out.empty()) return out;

  // Variable discipline.
  auto over = [&](const Expr& e, Var want, const std::string& what) {
    if (auto v = e.variable(); v && *v != want) {
      report("var", what + " must be an expression in '" + std::string(1, to_char(want)) + "'");
    }
  };
  for (const auto& [name, m] : matrices) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        over((*m)(i, j), Var::t, std::string(name) + "_" + std::to_string(i + 1) +
                                     std::to_string(j + 1));
  }
  over(s.neutral_delay, Var::t, "tau");
  over(s.discrete_delay, Var::t, "delta");
  over(s.window_delay, Var::t, "r");
  for (std::size_t j = 0; j < n; ++j) {
    const std::string idx = std::to_string(j + 1);
    over(s.instant_act[j], Var::x, "f_" + idx);
    over(s.delayed_act[j], Var::x, "g_" + idx);
    over(s.distributed_act[j], Var::x, "h_" + idx);
    over(s.aux[j], Var::t, "v_" + idx);
    over(s.history[j], Var::t, "phi_" + idx);
  }
  if (!out.empty()) return out;

  const double t_max = s.window.t_max;
  const double step = s.window.step;
  if (!(t_max > 0.0) || !(step > 0.0)) {
    report("window", "sup window and step must be positive");
    return out;
  }
  const auto cells = static_cast<std::size_t>(std::ceil(t_max / step));

  // A1: nonnegative delays on the sampled window.
  const std::pair<const char*, const Expr*> delays[] = {
      {"tau", &s.neutral_delay}, {"delta", &s.discrete_delay}, {"r", &s.window_delay}};
  for (const auto& [name, d] : delays) {
    try {
      double worst = 0.0;
      double at = 0.0;
      for (std::size_t k = 0; k <= cells; ++k) {
        const double t = std::min(t_max, static_cast<double>(k) * step);
        const double val = (*d)(t);
        if (val < worst) {
          worst = val;
          at = t;
        }
        if (d->is_constant()) break;
      }
      if (worst < -kZeroTol) {
        report("A1", std::string(name) + "(" + num(at) + ") = " + num(worst) + " is negative");
      }
    } catch (const Error& e) {
      report("eval", std::string(name) + ": " + e.what());
    }
  }

  // A2: zero at the origin, nonnegative Lipschitz constants.
  const struct {
    const char* name;
    const std::vector<Expr>* acts;
    const char* lip_name;
    const std::vector<double>* lips;
  } acts[] = {{"f", &s.instant_act, "alpha", &s.instant_lip},
              {"g", &s.delayed_act, "beta", &s.delayed_lip},
              {"h", &s.distributed_act, "gamma", &s.distributed_lip}};
  for (const auto& a : acts) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string idx = std::to_string(j + 1);
      try {
        const double at0 = (*a.acts)[j](0.0);
        if (std::abs(at0) > kZeroTol) {
          report("A2", std::string(a.name) + "_" + idx + "(0) = " + num(at0) + ", expected 0");
        }
      } catch (const Error& e) {
        report("eval", std::string(a.name) + "_" + idx + ": " + e.what());
      }
      if (!((*a.lips)[j] >= 0.0)) {
        report("A2", std::string(a.lip_name) + "_" + idx + " must be nonnegative");
      }
    }
  }

  // Impulse schedule.
  const auto& imp = s.impulses;
  if (!imp.instants.empty()) {
    const std::size_t m = imp.instants.size();
    if (!(imp.instants.front() > 0.0)) report("impulses", "first impulse instant must be positive");
    for (std::size_t k = 1; k < m; ++k) {
      if (!(imp.instants[k] > imp.instants[k - 1])) {
        report("impulses", "impulse instants not strictly increasing at k=" +
                               std::to_string(k + 1));
      }
    }
    if (imp.maps.size() != n || imp.lipschitz.size() != n || imp.row_rate.size() != n) {
      report("dim", "impulse maps, p_ik and p_i need one row per component");
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (imp.maps[i].size() != m || imp.lipschitz[i].size() != m) {
        report("dim", "impulse row " + std::to_string(i + 1) + " needs one entry per instant");
        return out;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string idx = std::to_string(i + 1);
      for (std::size_t k = 0; k < m; ++k) {
        const std::string ik = idx + "," + std::to_string(k + 1);
        const Expr& map = imp.maps[i][k];
        if (auto v = map.variable(); v && *v != Var::x) {
          report("var", "I_" + ik + " must be an expression in 'x'");
          continue;
        }
        try {
          const double at0 = map(0.0);
          if (std::abs(at0) > kZeroTol) {
            report("A3", "I_" + ik + "(0) = " + num(at0) + ", expected 0");
          }
        } catch (const Error& e) {
          report("eval", "I_" + ik + ": " + e.what());
        }
        const double p = imp.lipschitz[i][k];
        if (!(p >= 0.0)) report("A3", "p_" + ik + " must be nonnegative");
        const double gap = imp.instants[k] - (k == 0 ? 0.0 : imp.instants[k - 1]);
        const double cap = imp.row_rate[i] * gap;
        if (p > cap + kZeroTol) {
          report("(ii)", "p_" + ik + " = " + num(p) + " exceeds p_" + idx + "*(t_k - t_{k-1}) = " +
                             num(cap));
        }
      }
    }
  }

  // (iii): v_i(t) >= eta_i > 0.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string idx = std::to_string(i + 1);
    const double eta = s.aux_floor[i];
    if (!(eta > 0.0)) {
      report("(iii)", "requires eta_" + idx + " > 0, got " + num(eta));
      continue;
    }
    try {
      double low = s.aux[i](0.0);
      double at = 0.0;
      if (!s.aux[i].is_constant()) {
        for (std::size_t k = 1; k <= cells; ++k) {
          const double t = std::min(t_max, static_cast<double>(k) * step);
          const double val = s.aux[i](t);
          if (val < low) {
            low = val;
            at = t;
          }
        }
      }
      if (!(low >= eta)) {
        report("(iii)", "v_" + idx + "(" + num(at) + ") = " + num(low) + " falls below eta_" +
                            idx + " = " + num(eta));
      }
    } catch (const Error& e) {
      report("eval", "v_" + idx + ": " + e.what());
    }
  }

  // History must be defined on [theta, 0].
  if (s.theta_floor > 0.0) report("theta", "theta must be <= 0");
  if (s.history_lo > s.theta_floor + kZeroTol) {
    report("history", "history starts at " + num(s.history_lo) + " but theta = " +
                          num(s.theta_floor));
  }
  for (std::size_t i = 0; i < n; ++i) {
    try {
      (void)s.history[i](0.0);
      if (s.theta_floor < 0.0) (void)s.history[i](s.theta_floor);
    } catch (const Error& e) {
      report("eval", "phi_" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

double theta(const SystemSpec& s) {
  const double t_max = s.window.t_max;
  const double step = s.window.step;
  double low = 0.0;
  const Expr* delays[] = {&s.neutral_delay, &s.discrete_delay, &s.window_delay};
  for (const Expr* d : delays) {
    if (d->is_constant()) {
      low = std::min(low, -d->constant_value());
      continue;
    }
    const auto cells = static_cast<std::size_t>(std::ceil(t_max / step));
    for (std::size_t k = 0; k <= cells; ++k) {
      const double t = std::min(t_max, static_cast<double>(k) * step);
      low = std::min(low, t - (*d)(t));
    }
  }
  return low;
}

SystemSpec strip_impulses(SystemSpec spec) {
  spec.impulses = ImpulseSchedule{};
  return spec;
}

double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

const char* to_string(Engine engine) {
  return engine == Engine::integrator ? "integrator" : "oracle";
}

const char* to_string(CertMode mode) {
  switch (mode) {
    case CertMode::asymptotic: return "asymptotic";
    case CertMode::exponential: return "exponential";
    case CertMode::corollary: return "corollary";
  }
  return "?";
}

bool Certificate::certified() const {
  return !conditions.empty() &&
         std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.holds; });
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::size_t dim, std::vector<Expr> history, double theta, Engine engine,
                       Interpolation interpolation, double step)
    : dim_(dim),
      history_(std::move(history)),
      theta_(theta),
      engine_(engine),
      interpolation_(interpolation),
      step_(step) {
  if (history_.size() != dim_) {
    throw Error(ErrorCode::invalid_argument, "history needs one expression per component");
  }
}

void Trajectory::push(double t, std::span<const double> x) {
  if (x.size() != dim_) throw Error(ErrorCode::invalid_argument, "state dimension mismatch");
  if (!times_.empty()) {
    if (t < times_.back()) {
      throw Error(ErrorCode::invalid_argument, "trajectory records must be time ordered");
    }
    if (t == times_.back()) {
      if (times_.size() >= 2 && times_[times_.size() - 2] == t) {
        throw Error(ErrorCode::invalid_argument, "an instant may appear at most twice");
      }
      segment_starts_.push_back(times_.size());
    }
  } else {
    segment_starts_.push_back(0);
  }
  times_.push_back(t);
  states_.insert(states_.end(), x.begin(), x.end());
}

void Trajectory::set_last(std::span<const double> x) {
  std::copy(x.begin(), x.end(), states_.end() - static_cast<std::ptrdiff_t>(dim_));
}

std::vector<double> Trajectory::impulse_times() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < segment_starts_.size(); ++k) {
    out.push_back(times_[segment_starts_[k]]);
  }
  return out;
}

std::vector<double> Trajectory::eval_at(double t, Side side) const {
  std::vector<double> out(dim_);
  eval_into(t, side, out);
  return out;
}

void Trajectory::history_into(double t, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) out[i] = history_[i].eval(Var::t, t);
}

Trajectory::Segment Trajectory::segment_for(double t, Side side) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  auto idx = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (side == Side::left && idx >= 1 && times_[idx] == t && times_[idx - 1] == t) --idx;
  auto seg = std::upper_bound(segment_starts_.begin(), segment_starts_.end(), idx);
  const std::size_t s = static_cast<std::size_t>(seg - segment_starts_.begin()) - 1;
  const std::size_t first = segment_starts_[s];
  const std::size_t last =
      s + 1 < segment_starts_.size() ? segment_starts_[s + 1] - 1 : times_.size() - 1;
  return {first, last};
}

void Trajectory::interpolate(const Segment& seg, double t, std::span<double> out) const {
  const std::size_t count = seg.last - seg.first + 1;
  auto lo = std::upper_bound(times_.begin() + static_cast<std::ptrdiff_t>(seg.first),
                             times_.begin() + static_cast<std::ptrdiff_t>(seg.last) + 1, t);
  std::size_t m = static_cast<std::size_t>(lo - times_.begin());
  m = m == seg.first ? seg.first : m - 1;  // last node <= t
  if (times_[m] == t || count == 1) {
    auto s = state(m);
    std::copy(s.begin(), s.end(), out.begin());
    return;
  }
  std::size_t start;
  std::size_t len;
  if (interpolation_ == Interpolation::linear) {
    start = std::min(m, seg.last - 1);
    len = 2;
  } else {
    len = std::min<std::size_t>(4, count);
    const std::size_t max_start = seg.last + 1 - len;
    start = m > seg.first ? m - 1 : seg.first;
    start = std::min(start, max_start);
  }
  std::array<double, 4> ts{};
  std::array<const double*, 4> ys{};
  for (std::size_t a = 0; a < len; ++a) {
    ts[a] = times_[start + a];
    ys[a] = states_.data() + (start + a) * dim_;
  }
  lagrange(std::span(ts.data(), len), std::span(ys.data(), len), t, out);
}

void Trajectory::eval_into(double t, Side side, std::span<double> out) const {
  if (out.size() != dim_) throw Error(ErrorCode::invalid_argument, "output dimension mismatch");
  if (!(t >= theta_) || t > horizon() || (t > 0.0 && times_.empty())) {
    throw Error(ErrorCode::out_of_range, "t=" + num(t) + " outside [" + num(theta_) + ", " +
                                             num(horizon()) + "]");
  }
  if (t < 0.0 || times_.empty() || (t == 0.0 && times_.front() > 0.0)) {
    history_into(t, out);
    return;
  }
  interpolate(segment_for(t, side), t, out);
}

void Trajectory::eval_ahead(double t, std::span<double> out, double tail_t,
                            std::span<const double> tail_x) const {
  if (t <= horizon() || times_.empty()) {
    if (t <= 0.0 || times_.empty()) {
      history_into(t, out);
    } else {
      interpolate(segment_for(t, Side::right), t, out);
    }
    return;
  }
  const std::size_t first = segment_starts_.back();
  const std::size_t last = times_.size() - 1;
  const std::size_t available = last - first + 1;
  const bool use_tail = !tail_x.empty() && tail_t > horizon();
  const std::size_t max_nodes = interpolation_ == Interpolation::linear ? 2 : 4;

  std::array<double, 4> ts{};
  std::array<const double*, 4> ys{};
  std::size_t len = 0;
  const std::size_t from_nodes = std::min(available, use_tail ? max_nodes - 1 : max_nodes);
  for (std::size_t a = 0; a < from_nodes; ++a) {
    const std::size_t k = last + 1 - from_nodes + a;
    ts[len] = times_[k];
    ys[len] = states_.data() + k * dim_;
    ++len;
  }
  if (use_tail) {
    ts[len] = tail_t;
    ys[len] = tail_x.data();
    ++len;
  }
  if (len == 1) {
    std::copy(ys[0], ys[0] + dim_, out.begin());
    return;
  }
  lagrange(std::span(ts.data(), len), std::span(ys.data(), len), t, out);
}

}  // namespace indde
