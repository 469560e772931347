#include "indde/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "indde/error.hpp"

namespace indde {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double sup_on(const Expr& e, const SupContext& ctx) {
  return sup_abs(e, ctx.lo, ctx.hi, ctx.step);
}

// Sup over [0, hi] of a nonnegative delay.
double delay_sup(const Expr& d, double hi, double step) {
  if (d.is_constant()) return std::abs(d.constant_value());
  return sup_abs(d, 0.0, hi, step);
}

bool bounded_on_window(const Expr& d, double hi, double step) {
  if (d.is_constant()) return true;
  const double first = sup_abs(d, 0.0, 0.5 * hi, step);
  const double second = sup_abs(d, 0.5 * hi, hi, step);
  return second <= first * (1.0 + 1e-6) + 1e-9;
}

double min_on_window(const Expr& e, double hi, double step) {
  if (e.is_constant()) return e.constant_value();
  const auto cells = static_cast<std::size_t>(std::ceil(hi / step));
  double low = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= cells; ++k) {
    low = std::min(low, e(std::min(hi, static_cast<double>(k) * step)));
  }
  return low;
}

Certificate assemble(const SystemSpec& spec, CertMode mode) {
  Certificate cert;
  cert.mode = mode;
  cert.grid_step = spec.window.step;
  cert.window = spec.window.t_max;
  cert.reference_rho = spec.reference_rho;
  cert.rigorous_constants = !spec.estimated_constants;

  const SupContext ctx = make_context(spec, mode);
  cert.delay_bound = ctx.delay_bound;
  const double hi = spec.window.t_max;
  const double step = spec.window.step;

  // (i) delay bound.
  {
    ConditionResult c{"(i)", true, ""};
    std::vector<std::pair<const char*, const Expr*>> checked = {{"r", &spec.window_delay}};
    if (mode == CertMode::exponential) {
      checked.insert(checked.begin(),
                     {{"tau", &spec.neutral_delay}, {"delta", &spec.discrete_delay}});
    }
    std::ostringstream detail;
    for (const auto& [name, d] : checked) {
      const double s = delay_sup(*d, hi, step);
      const bool bounded = bounded_on_window(*d, hi, step);
      detail << name << " sup " << num(s) << (bounded ? "" : " (growing)") << "; ";
      if (!bounded || s > ctx.delay_bound + 1e-12) c.holds = false;
    }
    detail << "mu = " << num(ctx.delay_bound);
    c.detail = detail.str();
    cert.conditions.push_back(std::move(c));
  }

  // (ii) impulse Lipschitz constants against the row rates.
  {
    ConditionResult c{"(ii)", true, ""};
    const auto& imp = spec.impulses;
    if (mode == CertMode::corollary || imp.empty()) {
      c.detail = "no impulses";
    } else {
      std::size_t bad = 0;
      for (std::size_t i = 0; i < spec.dim; ++i) {
        for (std::size_t k = 0; k < imp.count(); ++k) {
          const double gap = imp.instants[k] - (k == 0 ? 0.0 : imp.instants[k - 1]);
          if (imp.lipschitz[i][k] > imp.row_rate[i] * gap + 1e-12) ++bad;
        }
      }
      c.holds = bad == 0;
      c.detail = std::to_string(imp.count()) + " instants checked, " + std::to_string(bad) +
                 " violations";
    }
    cert.conditions.push_back(std::move(c));
  }

  // (iii) v_i >= eta_i > 0.
  {
    ConditionResult c{"(iii)", true, ""};
    std::ostringstream detail;
    for (std::size_t i = 0; i < spec.dim; ++i) {
      const double low = min_on_window(spec.aux[i], hi, step);
      const double eta = spec.aux_floor[i];
      if (!(eta > 0.0) || !(low >= eta)) c.holds = false;
      detail << "min v_" << i + 1 << " = " << num(low) << " vs eta_" << i + 1 << " = "
             << num(eta) << "; ";
    }
    c.detail = detail.str();
    cert.conditions.push_back(std::move(c));
  }

  // (iv) the contraction sum.
  double rho = 0.0;
  for (std::size_t i = 0; i < spec.dim; ++i) {
    cert.rows.push_back(row_term(spec, i, mode, ctx));
    rho += cert.rows.back().contribution;
  }
  cert.rho = rho;
  cert.conditions.push_back({"(iv)", rho < 1.0, "rho = " + num(rho)});

  if (mode == CertMode::exponential && cert.certified()) {
    cert.lambda_max = *std::min_element(spec.aux_floor.begin(), spec.aux_floor.end());
  }
  if (spec.reference_rho && std::abs(*spec.reference_rho - rho) > 1e-4) {
    cert.notes.push_back("published rho " + num(*spec.reference_rho) +
                         " differs from the recomputed " + num(rho) +
                         "; both values are reported");
  }
  if (spec.estimated_constants) {
    cert.notes.push_back("non-rigorous constants: some Lipschitz constants were estimated on a grid");
  }
  return cert;
}

}  // namespace

double kernel_sup(const Expr& v, double window, double step) {
  if (v.is_constant()) {
    const double c = v.constant_value();
    if (!(c > 0.0)) throw Error(ErrorCode::nonpositive_v, "v must be positive, got " + num(c));
    return 1.0 / c;
  }
  if (!(window > 0.0) || !(step > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "kernel_sup needs a positive window and step");
  }
  const auto cells = static_cast<std::size_t>(std::ceil(window / step));
  double t0 = 0.0;
  double v0 = v.eval(Var::t, 0.0);
  if (!(v0 > 0.0)) throw Error(ErrorCode::nonpositive_v, "v(0) = " + num(v0) + " <= 0");
  double inner = 0.0;
  double best = 0.0;
  for (std::size_t k = 1; k <= cells; ++k) {
    const double t1 = std::min(window, static_cast<double>(k) * step);
    const double v1 = v.eval(Var::t, t1);
    if (!(v1 > 0.0)) {
      throw Error(ErrorCode::nonpositive_v, "v(" + num(t1) + ") = " + num(v1) + " <= 0");
    }
    const double h = t1 - t0;
    const double mean = 0.5 * (v0 + v1);
    inner = inner * std::exp(-h * mean) - std::expm1(-h * mean) / mean;
    best = std::max(best, inner);
    t0 = t1;
    v0 = v1;
  }
  return best;
}

Expr cbar(const SystemSpec& spec, std::size_t i, std::size_t j) {
  if (i != j) return spec.linear(i, j);
  return Expr::sum(spec.linear(i, i), spec.aux[i]);
}

SupContext make_context(const SystemSpec& spec, CertMode mode) {
  SupContext ctx;
  ctx.lo = std::min(spec.theta_floor, 0.0);
  ctx.hi = spec.window.t_max;
  ctx.step = spec.window.step;
  if (spec.delay_bound) {
    ctx.delay_bound = *spec.delay_bound;
  } else {
    ctx.delay_bound = delay_sup(spec.window_delay, ctx.hi, ctx.step);
    if (mode == CertMode::exponential) {
      ctx.delay_bound = std::max({ctx.delay_bound, delay_sup(spec.neutral_delay, ctx.hi, ctx.step),
                                  delay_sup(spec.discrete_delay, ctx.hi, ctx.step)});
    }
  }
  return ctx;
}

RowTerms row_term(const SystemSpec& spec, std::size_t i, CertMode mode, const SupContext& ctx) {
  RowTerms row;
  for (std::size_t j = 0; j < spec.dim; ++j) {
    const Expr& q = spec.neutral(i, j);
    row.neutral_sup = std::max(row.neutral_sup, sup_on(q, ctx));
    row.linear_sup = std::max(row.linear_sup, sup_on(cbar(spec, i, j), ctx));
    row.instant_sup = std::max(
        row.instant_sup,
        sup_on(Expr::product(spec.instant(i, j), Expr::constant(spec.instant_lip[j])), ctx));
    row.delayed_sup = std::max(
        row.delayed_sup,
        sup_on(Expr::product(spec.delayed(i, j), Expr::constant(spec.delayed_lip[j])), ctx));
    row.distributed_sup = std::max(
        row.distributed_sup,
        sup_on(Expr::product(spec.distributed(i, j),
                             Expr::constant(ctx.delay_bound * spec.distributed_lip[j])),
               ctx));
    row.neutral_aux_sup = std::max(row.neutral_aux_sup, sup_on(Expr::product(q, spec.aux[i]), ctx));
  }
  const bool impulsive = mode != CertMode::corollary && !spec.impulses.empty();
  row.impulse_rate = impulsive ? std::abs(spec.impulses.row_rate[i]) : 0.0;
  row.kernel_sup = kernel_sup(spec.aux[i], ctx.hi, ctx.step);
  row.contribution = row.neutral_sup + row.weighted_sum() * row.kernel_sup;
  return row;
}

Certificate certify_asymptotic(const SystemSpec& spec) {
  return assemble(spec, CertMode::asymptotic);
}

Certificate certify_exponential(const SystemSpec& spec) {
  return assemble(spec, CertMode::exponential);
}

Certificate certify_corollary(const SystemSpec& spec) {
  if (!spec.impulses.empty()) {
    throw Error(ErrorCode::non_empty_impulses,
                "the impulse-free test requires an empty impulse schedule");
  }
  return assemble(spec, CertMode::corollary);
}

bool delays_bounded(const SystemSpec& spec) {
  const double hi = spec.window.t_max;
  const double step = spec.window.step;
  return bounded_on_window(spec.neutral_delay, hi, step) &&
         bounded_on_window(spec.discrete_delay, hi, step) &&
         bounded_on_window(spec.window_delay, hi, step);
}

Certificate certify(const SystemSpec& spec, ModeRequest request) {
  switch (request) {
    case ModeRequest::asymptotic:
      return certify_asymptotic(spec);
    case ModeRequest::exponential:
      return certify_exponential(spec);
    case ModeRequest::automatic:
      return delays_bounded(spec) ? certify_exponential(spec) : certify_asymptotic(spec);
  }
  return certify_asymptotic(spec);
}

}  // namespace indde
