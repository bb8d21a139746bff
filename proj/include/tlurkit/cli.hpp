#pragma once

#include <iosfwd>

namespace tlurkit {

/// Entry point for the tlurkit command-line tool. Exit codes: 0 success,
/// 2 invalid input, 1 numerical or internal failure. Diagnostics are
/// written to `err` as one JSON object per line.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tlurkit
