#pragma once
// Plain-text problem files.
//
//   # comment
//   [system]          n, name, reference_rho
//   [matrix.Q]        i j = "<expr in t>"   (also matrix.C, .A, .B, .W)
//   [delays]          tau, delta, r = "<expr in t>"; mu = <number>
//   [nonlinearities]  f, g, h = "<expr in x>" (all components) or f1, g2, ...
//                     alpha, beta, gamma = <number> (or alpha1, ...)
//   [auxiliary]       v = "<expr in t>", eta = <number> (or v1, eta1, ...)
//   [impulses]        instants = [t1, t2, ...] | generator = "t_{k-1} + <expr in k>"
//                     count, map = "<expr in x>" (or map1, ...), p_ik, p_i (or p_ik1, p_i1, ...)
//   [history]         phi1, phi2, ... = "<expr in t>", lo = <number>
//   [run]             horizon, step, quad_points, recovery_tol, recovery_max_iter,
//                     picard_grid, picard_tol, picard_max_iter, sup_window, sup_step
//
// Omitted matrix entries are 0. Omitted Lipschitz constants are estimated
// on [-10, 10] and flagged.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "indde/error.hpp"
#include "indde/model.hpp"
#include "indde/oracle.hpp"
#include "indde/simulate.hpp"

namespace indde {

struct LoadedSpec {
  SystemSpec spec;
  IntegratorConfig integrator;
  OracleConfig oracle;

  // Impulse data before expansion to the instant list.
  std::vector<Expr> impulse_maps;
  std::vector<double> impulse_lip;
  std::vector<double> impulse_rate;
  std::vector<double> explicit_instants;
  std::optional<std::size_t> generator_count;

  /// Keys whose values were estimated rather than given ("alpha1", "p_ik2", ...).
  std::set<std::string> estimated;
  std::vector<std::string> warnings;
};

/// Raised when a file parses but the resulting spec violates assumptions.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Parses and validates. Throws SpecFileError or ValidationError.
LoadedSpec parse_spec(std::string_view text);
LoadedSpec load(const std::filesystem::path& path);

/// Changes the run horizon and re-expands a generated impulse schedule.
void set_horizon(LoadedSpec& loaded, double horizon);

/// Text that parses back to an equivalent LoadedSpec.
std::string serialize(const LoadedSpec& loaded);

/// Built-in problem files.
std::optional<std::string_view> builtin_example(std::string_view name);
std::vector<std::string> builtin_names();

}  // namespace indde
