#pragma once

namespace fogmatch {

// Full command-line front end. Exit codes: 0 success, 1 usage error,
// 2 infeasible configuration, 3 verification failure.
int run_cli(int argc, const char* const* argv);

} // namespace fogmatch
