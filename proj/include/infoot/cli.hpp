#pragma once

#include <iosfwd>

namespace infoot {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNotConverged = 2;

/// Command-line entry point: `<subcommand> <spec.json> [overrides]`. Returns
/// 0 on success, 1 on invalid input, 2 when a solver did not converge (all
/// outputs are still written).
int cli_run(int argc, const char* const* argv);
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infoot
