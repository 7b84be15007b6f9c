#pragma once

// Command-line front end. Exit codes: 0 holds/valid, 1 fails/invalid,
// 2 usage or configuration error, 3 internal inconsistency.

#include <iosfwd>
#include <string>
#include <vector>

namespace bccs {

enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2, kInternal = 3 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bccs
