#pragma once

#include <string>
#include <vector>

namespace ckdv::cli {

// Full command-line entry point. Exit code contract: 0 success, 1 runtime
// failure (blow-up, vacuum, bad config), 2 verification failure (residuals
// over threshold, non-monotone convergence).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace ckdv::cli
