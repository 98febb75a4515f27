#pragma once

#include <string>
#include <vector>

namespace relnet {

// Full command-line driver. Subcommands: inspect, train, predict, crossval,
// bench-sims. Returns the process exit code: 0 success, 1 usage error,
// 2 data error. Lives in the library so tests can drive it in-process.
int run_cli(int argc, const char* const* argv);

// Convenience wrapper: args without the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace relnet
