#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace siwkit {

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain_error = 1;
inline constexpr int exit_usage_error = 2;

/// Runs the command-line interface. `args` excludes the program name.
/// Data goes to `out` (or to --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siwkit
