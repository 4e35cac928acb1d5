#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dispersion::cli {

// Exit codes: 0 success, 1 usage or precondition error, 2 a zero-tolerance
// verification suite failed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "log:a:b:k", "lin:a:b:k" or a comma-separated list.
std::vector<double> parse_eps_grid(const std::string& spec);

}  // namespace dispersion::cli
