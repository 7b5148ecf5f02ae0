#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typent::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kInfeasible = 3,
    kNonConvergence = 4,
};

/// Runs one command line (without the program name). Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a key=value config file. Blank lines and lines starting with '#'
/// are skipped. Throws DomainError on a malformed line.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

}  // namespace typent::cli
