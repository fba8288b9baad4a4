#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace slp::cli {

inline constexpr const char* version = "0.1.0";

// Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error,
// 3 physics-domain validation error, 4 numerical failure.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace slp::cli
