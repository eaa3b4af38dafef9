#pragma once

namespace qim::cli {

// Full command-line driver; returns the process exit code (0 success,
// 1 runtime failure with a single-line error, 2 usage errors).
int run(int argc, const char* const* argv);

} // namespace qim::cli
