#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mldp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

// Parses "start:stop:step" into the inclusive grid start, start + step, ...
std::vector<double> parse_range(const std::string& spec);

// Entry point of the `mldp` tool.  Output goes to `out` unless --output is
// given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mldp
