// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "pnspec/errors.hpp"

namespace pnspec {

// Configurable-precision binary floating-point value.
//
// Every operation rounds to nearest-even at the precision carried by the
// value, so a single operation has relative error at most 2^(1-p).  Values
// are immutable in spirit: arithmetic produces new values, and the few
// in-place kernel entry points (see scalar.hpp) are only used by the dense
// linear-algebra loops.  There are no NaN/Inf semantics; operations that
// would produce them raise numeric_error instead.
class ExtendedReal {
 public:
  static constexpr unsigned kDefaultPrecision = 256;
  static constexpr unsigned kMinPrecision = 8;
  static constexpr unsigned kMaxPrecision = 16384;

  explicit ExtendedReal(unsigned precision = kDefaultPrecision) {
    check_precision(precision);
    mpfr_init2(v_, static_cast<mpfr_prec_t>(precision));
    mpfr_set_zero(v_, +1);
  }
  ExtendedReal(double x, unsigned precision) : ExtendedReal(precision) {
    mpfr_set_d(v_, x, MPFR_RNDN);  // exact: p >= 53
  }
  ExtendedReal(long x, unsigned precision) : ExtendedReal(precision) {
    mpfr_set_si(v_, x, MPFR_RNDN);
  }

  ExtendedReal(const ExtendedReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  ExtendedReal(ExtendedReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  ExtendedReal& operator=(const ExtendedReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ExtendedReal& operator=(ExtendedReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~ExtendedReal() { mpfr_clear(v_); }

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_negative() const { return mpfr_sgn(v_) < 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // mantissa-and-exponent view: |x| = m * 2^e with m in [0.5, 1)
  double mantissa_2exp(long* e) const {
    if (is_zero()) { *e = 0; return 0.0; }
    return mpfr_get_d_2exp(e, v_, MPFR_RNDN);
  }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    ExtendedReal r(common_precision(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) {
    ExtendedReal r(common_precision(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
    ExtendedReal r(common_precision(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator/(const ExtendedReal& a, const ExtendedReal& b) {
    if (b.is_zero()) throw numeric_error("division by exact zero");
    ExtendedReal r(common_precision(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator-(const ExtendedReal& a) {
    ExtendedReal r(a);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend ExtendedReal operator*(const ExtendedReal& a, double d) {
    ExtendedReal r(a.precision());
    mpfr_mul_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator*(double d, const ExtendedReal& a) { return a * d; }
  friend ExtendedReal operator/(const ExtendedReal& a, long d) {
    if (d == 0) throw numeric_error("division by exact zero");
    ExtendedReal r(a.precision());
    mpfr_div_si(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator+(const ExtendedReal& a, double d) {
    ExtendedReal r(a.precision());
    mpfr_add_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend ExtendedReal operator-(const ExtendedReal& a, double d) {
    ExtendedReal r(a.precision());
    mpfr_sub_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }

  ExtendedReal& operator+=(const ExtendedReal& b) {
    require_same_precision(*this, b);
    mpfr_add(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  ExtendedReal& operator-=(const ExtendedReal& b) {
    require_same_precision(*this, b);
    mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  ExtendedReal& operator*=(const ExtendedReal& b) {
    require_same_precision(*this, b);
    mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return mpfr_cmp(a.v_, b.v_) == 0;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
    return mpfr_cmp(a.v_, b.v_) <= 0;
  }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) {
    return mpfr_cmp(a.v_, b.v_) > 0;
  }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) {
    return mpfr_cmp(a.v_, b.v_) >= 0;
  }

  friend ExtendedReal abs(const ExtendedReal& a) {
    ExtendedReal r(a);
    mpfr_abs(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  // result r satisfies |r^2 - a| <= 2^(1-p) * a (correct rounding).
  friend ExtendedReal sqrt(const ExtendedReal& a) {
    if (a.is_negative()) throw numeric_error("sqrt of negative value");
    ExtendedReal r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  // correctly rounded exponential; raises numeric_error on exponent overflow.
  friend ExtendedReal exp(const ExtendedReal& a) {
    ExtendedReal r(a.precision());
    mpfr_clear_flags();
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    if (mpfr_inf_p(r.v_) || mpfr_nan_p(r.v_))
      throw numeric_error("exp result out of exponent range");
    return r;
  }

  friend ExtendedReal log(const ExtendedReal& a) {
    if (a.sign() <= 0) throw numeric_error("log of non-positive value");
    ExtendedReal r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend ExtendedReal pow_int(const ExtendedReal& a, long n) {
    ExtendedReal r(a.precision());
    mpfr_pow_si(r.v_, a.v_, n, MPFR_RNDN);
    if (mpfr_inf_p(r.v_) || mpfr_nan_p(r.v_))
      throw numeric_error("pow result out of exponent range");
    return r;
  }

  // sqrt(re^2 + im^2) without intermediate overflow
  friend ExtendedReal hypot(const ExtendedReal& a, const ExtendedReal& b) {
    ExtendedReal r(common_precision(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  // pi and ln2, computed once per precision and cached; the cache is safe
  // under concurrent first use.
  static ExtendedReal pi(unsigned precision);
  static ExtendedReal ln2(unsigned precision);

  // Decimal scientific notation, e.g. "-2.7182818284590452E+0".
  // digits <= 0 selects the round-trip digit count for this precision.
  std::string str(int digits = 0) const;
  static ExtendedReal parse(const std::string& text, unsigned precision);
  // smallest digit count d such that parse(str(x, d)) == x for all x
  static int roundtrip_digits(unsigned precision);

  // raw handle for the dense kernels (scalar.hpp); not part of the public API
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  static void check_precision(unsigned p) {
    if (p < kMinPrecision || p > kMaxPrecision)
      throw usage_error("precision out of supported range [8, 16384] bits");
  }
  static unsigned common_precision(const ExtendedReal& a, const ExtendedReal& b) {
    require_same_precision(a, b);
    return a.precision();
  }
  static void require_same_precision(const ExtendedReal& a, const ExtendedReal& b) {
    if (mpfr_get_prec(a.v_) != mpfr_get_prec(b.v_))
      throw usage_error("operands carry different precisions");
  }

  mpfr_t v_;
};

// Complex value over ExtendedReal.  |z|^2 and |z| avoid intermediate
// overflow for exponents within range (hypot-based modulus).
struct ExtendedComplex {
  ExtendedReal re, im;

  explicit ExtendedComplex(unsigned precision = ExtendedReal::kDefaultPrecision)
      : re(precision), im(precision) {}
  ExtendedComplex(ExtendedReal r, ExtendedReal i) : re(std::move(r)), im(std::move(i)) {}

  unsigned precision() const { return re.precision(); }

  friend ExtendedComplex operator+(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExtendedComplex operator-(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExtendedComplex operator*(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExtendedComplex conj(const ExtendedComplex& a) { return {a.re, -a.im}; }

  ExtendedReal abs2() const { return re * re + im * im; }
  ExtendedReal abs() const { return hypot(re, im); }
};

}  // namespace pnspec
