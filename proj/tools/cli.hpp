#pragma once

#include <iosfwd>

namespace ipdt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

/// Runs the `ipdt` command line. Reports go to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 for invalid input or I/O failure, 2 for numeric
/// failure (divergence, degenerate tuning specification).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ipdt::cli
