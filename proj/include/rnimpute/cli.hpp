#pragma once

#include <ostream>

namespace rnimpute::cli {

/// Entry point for the `rnimpute` tool. Data goes to `out`, diagnostics to
/// `err`; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rnimpute::cli
