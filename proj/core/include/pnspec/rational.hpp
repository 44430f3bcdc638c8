// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "pnspec/errors.hpp"

namespace pnspec {

// Exact rational, used for the scaling parameter so that values like 1/512
// enter every precision mode without representation error.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw usage_error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool positive() const { return num > 0; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    // denominators are positive after normalization
    return a.num * b.den < b.num * a.den;
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p/q", integers, and plain decimals ("0.5").
  static Rational parse(const std::string& text) {
    if (text.empty()) throw usage_error("empty rational");
    const auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        return Rational(std::stoll(text.substr(0, slash)),
                        std::stoll(text.substr(slash + 1)));
      }
      const auto dot = text.find('.');
      if (dot == std::string::npos) return Rational(std::stoll(text), 1);
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(std::stoll(digits), den);
    } catch (const std::exception&) {
      throw usage_error("cannot parse rational: '" + text + "'");
    }
  }
};

}  // namespace pnspec
