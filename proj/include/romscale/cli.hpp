#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace romscale {

/// Runs the command line tool; args excludes the program name.
/// Exit codes: 0 success, 1 validation/config/usage errors, 2 numerical failure.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace romscale
