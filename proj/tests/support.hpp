#pragma once

#include <cmath>
#include <string>

#include "indde/expr.hpp"
#include "indde/model.hpp"
#include "indde/specfile.hpp"

namespace indde::testing {

inline LoadedSpec example(const char* name) { return parse_spec(*builtin_example(name)); }

/// Copy with every neutral coefficient multiplied by `factor`.
inline SystemSpec scale_neutral(SystemSpec spec, double factor) {
  for (std::size_t i = 0; i < spec.dim; ++i)
    for (std::size_t j = 0; j < spec.dim; ++j)
      if (!spec.neutral(i, j).is_zero())
        spec.neutral(i, j) = Expr::product(Expr::constant(factor), spec.neutral(i, j));
  return spec;
}

/// Copy with zero history.
inline SystemSpec zero_history(SystemSpec spec) {
  for (auto& phi : spec.history) phi = Expr{};
  return spec;
}

/// x' = -x, x(0) = 1, nothing else.
inline SystemSpec scalar_decay() {
  SystemSpec s = SystemSpec::zero(1);
  s.name = "scalar";
  s.linear(0, 0) = Expr::constant(-1.0);
  s.history[0] = parse("exp(-t)");
  s.aux[0] = Expr::constant(1.0);
  s.aux_floor[0] = 0.5;
  return s;
}

}  // namespace indde::testing
