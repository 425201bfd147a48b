#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace snb::cli {

/// Runs one command line (args[0] is the program name). Normal output goes
/// to `out`, diagnostics and --dump-signs output to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snb::cli
