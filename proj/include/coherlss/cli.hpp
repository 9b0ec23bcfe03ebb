#pragma once

#include <ostream>

namespace coherlss::cli {

/// Entry point of the command-line tool.
///
/// Exit status: 0 on success, 2 on a configuration or usage error (the message
/// names the violated invariant or the offending path), 1 on a numerical
/// failure or a failed validation check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace coherlss::cli
