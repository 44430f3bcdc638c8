// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace pnspec {

// Full command-line front end; returns the process exit code
// (0 success, 2 usage error, 3 numerical failure).
int run_cli(std::vector<std::string> args);

}  // namespace pnspec
