#pragma once

#include <ostream>
#include <span>
#include <string>

namespace sememe_kb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one CLI invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sememe_kb
