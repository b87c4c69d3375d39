#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace switchsim {

// Full command-line entry point (args without the program name).
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.25" or "1/3"
double parse_probability(const std::string& text);

}  // namespace switchsim
