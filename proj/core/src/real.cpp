// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#include "pnspec/real.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <mutex>
#include <vector>

namespace pnspec {
namespace {

std::mutex g_const_mutex;
std::map<unsigned, std::pair<ExtendedReal, ExtendedReal>>& const_cache() {
  static std::map<unsigned, std::pair<ExtendedReal, ExtendedReal>> cache;
  return cache;
}

const std::pair<ExtendedReal, ExtendedReal>& constants_for(unsigned precision) {
  std::lock_guard<std::mutex> lock(g_const_mutex);
  auto& cache = const_cache();
  auto it = cache.find(precision);
  if (it == cache.end()) {
    ExtendedReal pi(precision), ln2(precision);
    mpfr_const_pi(pi.raw(), MPFR_RNDN);
    mpfr_const_log2(ln2.raw(), MPFR_RNDN);
    it = cache.emplace(precision, std::make_pair(std::move(pi), std::move(ln2))).first;
  }
  return it->second;
}

}  // namespace

ExtendedReal ExtendedReal::pi(unsigned precision) { return constants_for(precision).first; }
ExtendedReal ExtendedReal::ln2(unsigned precision) { return constants_for(precision).second; }

int ExtendedReal::roundtrip_digits(unsigned precision) {
  // p * log10(2) digits resolve the mantissa; two extra cover the rounding
  // boundary both ways.
  return static_cast<int>(std::ceil(precision * 0.301029995663981195)) + 2;
}

std::string ExtendedReal::str(int digits) const {
  if (digits <= 0) digits = roundtrip_digits(precision());
  if (is_zero()) {
    std::string s = "0.";
    s.append(static_cast<std::size_t>(digits - 1), '0');
    s += "E+0";
    return s;
  }
  mpfr_exp_t e = 0;
  char* raw_digits = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits),
                                  v_, MPFR_RNDN);
  if (raw_digits == nullptr) throw numeric_error("decimal conversion failed");
  std::string mant(raw_digits);
  mpfr_free_str(raw_digits);

  std::string out;
  std::size_t first = 0;
  if (!mant.empty() && mant[0] == '-') {
    out += '-';
    first = 1;
  }
  // mpfr yields digits d1 d2 ... with value 0.d1d2... * 10^e
  out += mant[first];
  out += '.';
  out += mant.substr(first + 1);
  const long ep = static_cast<long>(e) - 1;
  out += 'E';
  out += (ep < 0) ? '-' : '+';
  out += std::to_string(ep < 0 ? -ep : ep);
  return out;
}

ExtendedReal ExtendedReal::parse(const std::string& text, unsigned precision) {
  ExtendedReal r(precision);
  const char* s = text.c_str();
  char* end = nullptr;
  mpfr_strtofr(r.raw(), s, &end, 10, MPFR_RNDN);
  if (end == s || (end != nullptr && *end != '\0'))
    throw usage_error("cannot parse decimal value: '" + text + "'");
  if (mpfr_inf_p(r.raw()) || mpfr_nan_p(r.raw()))
    throw numeric_error("parsed value out of exponent range");
  return r;
}

}  // namespace pnspec
