#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moatlab {

// args excludes the program name. Exit codes: 0 ok, 1 failure or bad
// input, 2 missing file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moatlab
