#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace spcert {

const char* tool_version() noexcept;

/// Runs one `spcert` subcommand. `args` excludes the program name.
/// Reports go to `out` (or --out), a one-line summary and diagnostics to `err`.
/// Exit status: 0 success, 1 usage or input error, 2 computation error.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace spcert
