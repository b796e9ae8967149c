#pragma once

#include <ostream>

namespace promptsparse::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kEpisodeFailures = 1;
inline constexpr int kInputError = 2;
inline constexpr int kBackendError = 3;

// Entry point of the `promptsparse` command; `out`/`err` receive what
// main() would print to stdout/stderr.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace promptsparse::cli
