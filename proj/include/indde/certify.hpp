#pragma once

#include "indde/expr.hpp"
#include "indde/model.hpp"

namespace indde {

/// sup over t in [0, window] of int_0^t exp(-int_s^t v(u) du) ds.
///
/// A constant v = c short-circuits to the closed form 1/c. Otherwise v is
/// replaced on each cell of spacing `step` by its trapezoid mean and the
/// resulting piecewise-exponential integrand is integrated exactly. Throws nonpositive_v if
/// v <= 0 at any grid point.
double kernel_sup(const Expr& v, double window, double step);

/// c_ij for i != j and c_ii + v_i on the diagonal (constants folded).
Expr cbar(const SystemSpec& spec, std::size_t i, std::size_t j);

/// Sampling context for the suprema of one certificate.
struct SupContext {
  double lo = 0.0;      // theta
  double hi = 100.0;    // window end
  double step = 1e-3;
  double delay_bound = 0.0;
};

SupContext make_context(const SystemSpec& spec, CertMode mode);

RowTerms row_term(const SystemSpec& spec, std::size_t i, CertMode mode, const SupContext& ctx);

Certificate certify_asymptotic(const SystemSpec& spec);
Certificate certify_exponential(const SystemSpec& spec);
/// Impulse-free variant; throws non_empty_impulses when the schedule is not empty.
Certificate certify_corollary(const SystemSpec& spec);

/// True when every delay's sampled supremum does not keep growing across the window.
bool delays_bounded(const SystemSpec& spec);

enum class ModeRequest { asymptotic, exponential, automatic };

/// Dispatches on `request`; automatic picks the exponential test when all
/// delays are bounded and the asymptotic one otherwise.
Certificate certify(const SystemSpec& spec, ModeRequest request);

}  // namespace indde
