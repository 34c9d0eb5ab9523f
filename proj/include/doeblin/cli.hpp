#pragma once

#include <iosfwd>

namespace doeblin {

/// Entry point of the command-line tool. JSON goes to `out`, notes and
/// errors to `err`. Returns 0 on success, 1 on parse or validation
/// errors, 2 when the request is infeasible.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace doeblin
