#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnorm::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2, kPropertyFailure = 3 };

/// Runs the pnorm command line with argv-style arguments (args[0] is the
/// program name). JSON goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnorm::cli
