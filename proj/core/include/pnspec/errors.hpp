// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pnspec {

// Invalid arguments, malformed input files, inconsistent shapes.
class usage_error : public std::invalid_argument {
 public:
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Arithmetic failures: division by exact zero, exponent overflow,
// negative sqrt operand, values below the precision floor where a
// finite result is required.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pnspec
