// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace embdim {

// stable exit-code contract for scripting
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;         // unreadable/malformed input
inline constexpr int kExitPrecondition = 2;  // contract violation (k >= n, bad flags)
inline constexpr int kExitInternal = 3;      // invariant failure, unexpected error

/// Entry point shared by the binary and the tests.
int run_cli(const std::vector<std::string>& args);

}  // namespace embdim
