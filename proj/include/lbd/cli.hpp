#pragma once

#include <string>
#include <vector>

namespace lbd::cli {

// Entry point shared by the binary and the in-process CLI tests.
// Exit codes: 0 success, 1 I/O or math failure, 2 inconsistent detection.
int run(const std::vector<std::string>& args);

}  // namespace lbd::cli
