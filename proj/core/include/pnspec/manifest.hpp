// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "pnspec/errors.hpp"
#include "pnspec/sha256.hpp"

namespace pnspec {

// Record of one CLI run: the exact invocation, the configuration snapshot,
// and a digest of every file the run produced.  Re-running the same
// invocation at the same precision reproduces the same digests.
struct RunManifest {
  std::string command_line;
  std::vector<std::pair<std::string, std::string>> config;  // key, value
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;  // paths

  void add(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
  }

  // appends one [run] block to <dir>/manifest.txt
  void append_to(const std::string& dir) const {
    const std::string path = dir.empty() ? "manifest.txt" : dir + "/manifest.txt";
    std::ofstream os(path, std::ios::app);
    if (!os) throw usage_error("cannot write manifest: " + path);
    os << "[run]\n";
    os << "command = " << command_line << "\n";
    for (const auto& [k, v] : config) os << k << " = " << v << "\n";
    os << "wall_seconds = " << wall_seconds << "\n";
    for (const std::string& out : outputs)
      os << "output = " << out << " sha256=" << sha256_file_hex(out) << "\n";
    os << "\n";
  }
};

}  // namespace pnspec
