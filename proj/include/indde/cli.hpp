#pragma once

#include <iosfwd>
#include <string>

#include "indde/analyze.hpp"
#include "indde/model.hpp"
#include "indde/oracle.hpp"

namespace indde {

namespace exit_code {
constexpr int ok = 0;
constexpr int not_certified = 1;
constexpr int usage = 2;
constexpr int integration = 3;
constexpr int oracle = 4;
}  // namespace exit_code

/// `key=value` lines for a certificate, parseable on their own.
std::string certificate_block(const Certificate& cert);
/// Human summary followed by the machine block.
std::string render_certificate(const Certificate& cert, const std::string& name);

std::string decay_block(const DecayReport& report);
std::string crosscheck_block(const CrosscheckReport& report, double tol);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace indde
