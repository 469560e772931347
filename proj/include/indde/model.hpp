#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indde/expr.hpp"

namespace indde {

/// Square matrix of coefficient expressions in `t`; entries default to 0.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), entries_(n * n) {}

  std::size_t size() const { return n_; }
  Expr& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  bool is_zero() const;

  /// Fills `out` (row-major, n*n) with the entries evaluated at `t`.
  void eval_into(double t, std::span<double> out) const;

 private:
  std::size_t n_ = 0;
  std::vector<Expr> entries_;
};

struct ImpulseSchedule {
  /// Strictly increasing positive instants.
  std::vector<double> instants;
  /// maps[i][k]: jump of component i at instants[k] as a function of the
  /// pre-impulse component value.
  std::vector<std::vector<Expr>> maps;
  /// Lipschitz constants of maps[i][k].
  std::vector<std::vector<double>> lipschitz;
  /// Per-row constants bounding lipschitz[i][k] / (t_k - t_{k-1}).
  std::vector<double> row_rate;
  /// Optional recurrence increment in `k`: t_k = t_{k-1} + increment(k).
  std::optional<Expr> increment;

  bool empty() const { return instants.empty(); }
  std::size_t count() const { return instants.size(); }
};

/// Instants produced by t_k = t_{k-1} + increment(k), t_0 = 0. With
/// `count` absent, generates every instant up to and including `cover`.
std::vector<double> generate_instants(const Expr& increment, std::optional<std::size_t> count,
                                      double cover);

/// Finite window on which suprema over t >= theta are sampled.
struct SupWindow {
  double t_max = 100.0;
  double step = 1e-3;
};

/// One problem instance of the impulsive neutral system
///
///   d[x(t) - Q(t) x(t - tau(t))] = [C x + A f(x) + B g(x(t - delta))
///                                   + W int_{t-r}^{t} h(x(s)) ds] dt,
///
/// with jumps at the scheduled instants and history phi on [theta, 0].
struct SystemSpec {
  std::string name;
  std::size_t dim = 0;

  Matrix neutral;      // Q
  Matrix linear;       // C
  Matrix instant;      // A, multiplies f(x(t))
  Matrix delayed;      // B, multiplies g(x(t - delta(t)))
  Matrix distributed;  // W, multiplies the windowed integral of h

  Expr neutral_delay;   // tau
  Expr discrete_delay;  // delta
  Expr window_delay;    // r

  std::vector<Expr> instant_act;      // f_j
  std::vector<Expr> delayed_act;      // g_j
  std::vector<Expr> distributed_act;  // h_j
  std::vector<double> instant_lip;      // alpha_j
  std::vector<double> delayed_lip;      // beta_j
  std::vector<double> distributed_lip;  // gamma_j

  std::vector<Expr> aux;          // v_i
  std::vector<double> aux_floor;  // eta_i, v_i(t) > eta_i > 0

  std::optional<double> delay_bound;  // mu; defaults to the sampled delay sup

  ImpulseSchedule impulses;

  std::vector<Expr> history;  // phi_i on [history_lo, 0]
  double history_lo = -1.0;
  double theta_floor = 0.0;

  SupWindow window;

  /// True when any Lipschitz constant was estimated numerically.
  bool estimated_constants = false;
  /// Published value of rho for shipped examples.
  std::optional<double> reference_rho;

  /// A dimension-n system with every coefficient, delay and map zero,
  /// v_i = 1, eta_i = 0.5 and zero history.
  static SystemSpec zero(std::size_t n);
};

struct Violation {
  std::string assumption;  // "A1", "A2", "A3", "(ii)", "(iii)", "dim", "eval", ...
  std::string detail;

  std::string to_string() const { return assumption + ": " + detail; }
};

/// All assumption violations found on the sampled window; empty iff valid.
std::vector<Violation> validate(const SystemSpec& spec);

/// inf over sampled t >= 0 of t - tau(t), t - delta(t), t - r(t); always <= 0.
double theta(const SystemSpec& spec);

/// Copy of `spec` with the impulse schedule and row rates cleared.
SystemSpec strip_impulses(SystemSpec spec);

/// Sum of absolute values.
double norm1(std::span<const double> x);

enum class Side { left, right };
enum class Engine { integrator, oracle };
enum class Interpolation { cubic, linear };

const char* to_string(Engine engine);

/// Piecewise-smooth time series on [0, horizon] with exact history on
/// [theta, 0]. An impulse instant is stored twice: the left limit first,
/// then the post-impulse (right-continuous) state.
class Trajectory {
 public:
  Trajectory(std::size_t dim, std::vector<Expr> history, double theta, Engine engine,
             Interpolation interpolation, double step);

  /// Appends a record. `t` must not precede the last record; repeating the
  /// last time opens a new smooth segment (impulse right record).
  void push(double t, std::span<const double> x);

  /// Overwrites the most recent record's state.
  void set_last(std::span<const double> x);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t k) const { return times_[k]; }
  std::span<const double> times() const { return times_; }
  std::span<const double> state(std::size_t k) const {
    return {states_.data() + k * dim_, dim_};
  }
  double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
  double theta() const { return theta_; }
  double step() const { return step_; }
  Engine engine() const { return engine_; }
  Interpolation interpolation() const { return interpolation_; }
  const std::vector<Expr>& history() const { return history_; }

  /// True for the pre-impulse record of a duplicated instant.
  bool is_left_record(std::size_t k) const {
    return k + 1 < times_.size() && times_[k + 1] == times_[k];
  }
  std::vector<double> impulse_times() const;

  /// State at `t` in [theta, horizon]; `side` selects the record at an
  /// impulse instant. Throws out_of_range outside the domain.
  std::vector<double> eval_at(double t, Side side = Side::right) const;
  void eval_into(double t, Side side, std::span<double> out) const;

  /// Evaluation that may run past the last record. Within (horizon, tail_t]
  /// the last segment is interpolated through `tail_x` at `tail_t`; beyond
  /// that (or with no tail) it is extrapolated.
  void eval_ahead(double t, std::span<double> out, double tail_t,
                  std::span<const double> tail_x) const;

 private:
  struct Segment {
    std::size_t first;
    std::size_t last;
  };

  Segment segment_for(double t, Side side) const;
  void interpolate(const Segment& seg, double t, std::span<double> out) const;
  void history_into(double t, std::span<double> out) const;

  std::size_t dim_;
  std::vector<Expr> history_;
  double theta_;
  Engine engine_;
  Interpolation interpolation_;
  double step_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<std::size_t> segment_starts_;
};

enum class CertMode { asymptotic, exponential, corollary };

const char* to_string(CertMode mode);

/// Per-row summands of the contraction sum.
struct RowTerms {
  double neutral_sup = 0.0;      // max_j sup |q_ij|
  double linear_sup = 0.0;       // max_j sup |c_ij + [i==j] v_i|
  double instant_sup = 0.0;      // max_j sup |a_ij alpha_j|
  double delayed_sup = 0.0;      // max_j sup |b_ij beta_j|
  double distributed_sup = 0.0;  // max_j sup |w_ij mu gamma_j|
  double neutral_aux_sup = 0.0;  // max_j sup |q_ij v_i|
  double impulse_rate = 0.0;     // p_i
  double kernel_sup = 0.0;       // sup_t int_0^t exp(-int_s^t v_i) ds
  double contribution = 0.0;

  double weighted_sum() const {
    return linear_sup + instant_sup + delayed_sup + distributed_sup + neutral_aux_sup +
           impulse_rate;
  }
};

struct ConditionResult {
  std::string label;  // "(i)" .. "(iv)"
  bool holds = false;
  std::string detail;
};

struct Certificate {
  CertMode mode = CertMode::asymptotic;
  double rho = 0.0;
  std::vector<RowTerms> rows;
  std::vector<ConditionResult> conditions;
  std::optional<double> lambda_max;
  std::optional<double> reference_rho;
  double delay_bound = 0.0;
  double grid_step = 0.0;
  double window = 0.0;
  bool rigorous_constants = true;
  std::vector<std::string> notes;

  bool certified() const;
};

}  // namespace indde
