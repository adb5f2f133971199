#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace superloop::cli {

/// Exit codes: 0 success, 1 failed verification or module error, 2 usage or spec error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace superloop::cli
