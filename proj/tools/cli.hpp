#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bddl::cli {

// Exit codes: 0 ok, 1 diagnostics or failure, 2 usage or I/O error.
// Machine documents go to `out`; human-readable logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bddl::cli
