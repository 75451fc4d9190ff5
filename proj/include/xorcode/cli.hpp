#pragma once

#include <iosfwd>

namespace xorcode::cli {

// Entry point behind the xorcode binary. Exit status: 0 success, 1 domain
// error (singular design, infeasible schedule, failed decode), 2 usage or
// parse error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xorcode::cli
