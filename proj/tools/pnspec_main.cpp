// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pnspec::run_cli(std::move(args));
}
