// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "pnspec/rational.hpp"
#include "pnspec/real.hpp"

namespace pnspec {

// The solver, error analysis, and bound evaluators are generic over the
// scalar type: `double` for the fast native mode and ExtendedReal for the
// extended-precision mode.  ScalarOps is the small trait surface they share.
//
// `prec` arguments are in bits and ignored by the double specialization.

template <class R>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  using real = double;
  static constexpr bool is_native = true;

  static double make(double x, unsigned /*prec*/) { return x; }
  static double from_rational(const Rational& q, unsigned /*prec*/) {
    return static_cast<double>(q.num) / static_cast<double>(q.den);
  }
  static double pi(unsigned /*prec*/) { return M_PI; }
  static unsigned precision_bits(const double&) { return 53; }
  static double to_double(double x) { return x; }
  static double sqrt_(double x) { return std::sqrt(x); }
  static double exp_(double x) { return std::exp(x); }
  static double log_(double x) { return std::log(x); }
  static double abs_(double x) { return std::fabs(x); }
  static double pow_i(double x, long n) { return std::pow(x, static_cast<double>(n)); }
  static double sin_(double x) { return std::sin(x); }
  static double cos_(double x) { return std::cos(x); }
  static bool is_zero_(double x) { return x == 0.0; }
  static std::string str(double x, int digits);

  // in-place kernel ops
  static void set_zero(double& x) { x = 0.0; }
  static void mul_set(double& dst, double a, double b) { dst = a * b; }
  static void add_acc(double& acc, double x) { acc += x; }
  static void sub_acc(double& acc, double x) { acc -= x; }
  static void fma_acc(double& acc, double a, double b) { acc += a * b; }
  static void fms_acc(double& acc, double a, double b) { acc -= a * b; }
  static void div_ui(double& dst, double a, unsigned long j) {
    dst = a / static_cast<double>(j);
  }
};

template <>
struct ScalarOps<ExtendedReal> {
  using real = ExtendedReal;
  static constexpr bool is_native = false;

  static ExtendedReal make(double x, unsigned prec) { return ExtendedReal(x, prec); }
  static ExtendedReal from_rational(const Rational& q, unsigned prec) {
    return ExtendedReal(static_cast<long>(q.num), prec) /
           ExtendedReal(static_cast<long>(q.den), prec);
  }
  static ExtendedReal pi(unsigned prec) { return ExtendedReal::pi(prec); }
  static unsigned precision_bits(const ExtendedReal& x) { return x.precision(); }
  static double to_double(const ExtendedReal& x) { return x.to_double(); }
  static ExtendedReal sqrt_(const ExtendedReal& x) { return sqrt(x); }
  static ExtendedReal exp_(const ExtendedReal& x) { return exp(x); }
  static ExtendedReal log_(const ExtendedReal& x) { return log(x); }
  static ExtendedReal abs_(const ExtendedReal& x) { return abs(x); }
  static ExtendedReal pow_i(const ExtendedReal& x, long n) { return pow_int(x, n); }
  static ExtendedReal sin_(const ExtendedReal& x) {
    ExtendedReal r(x.precision());
    mpfr_sin(r.raw(), x.raw(), MPFR_RNDN);
    return r;
  }
  static ExtendedReal cos_(const ExtendedReal& x) {
    ExtendedReal r(x.precision());
    mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
    return r;
  }
  static bool is_zero_(const ExtendedReal& x) { return x.is_zero(); }
  static std::string str(const ExtendedReal& x, int digits) { return x.str(digits); }

  static void set_zero(ExtendedReal& x) { mpfr_set_zero(x.raw(), +1); }
  static void mul_set(ExtendedReal& dst, const ExtendedReal& a, const ExtendedReal& b) {
    mpfr_mul(dst.raw(), a.raw(), b.raw(), MPFR_RNDN);
  }
  static void add_acc(ExtendedReal& acc, const ExtendedReal& x) {
    mpfr_add(acc.raw(), acc.raw(), x.raw(), MPFR_RNDN);
  }
  static void sub_acc(ExtendedReal& acc, const ExtendedReal& x) {
    mpfr_sub(acc.raw(), acc.raw(), x.raw(), MPFR_RNDN);
  }
  static void fma_acc(ExtendedReal& acc, const ExtendedReal& a, const ExtendedReal& b) {
    mpfr_fma(acc.raw(), a.raw(), b.raw(), acc.raw(), MPFR_RNDN);
  }
  static void fms_acc(ExtendedReal& acc, const ExtendedReal& a, const ExtendedReal& b) {
    // acc - a*b == -(a*b - acc)
    mpfr_fms(acc.raw(), a.raw(), b.raw(), acc.raw(), MPFR_RNDN);
    mpfr_neg(acc.raw(), acc.raw(), MPFR_RNDN);
  }
  static void div_ui(ExtendedReal& dst, const ExtendedReal& a, unsigned long j) {
    mpfr_div_ui(dst.raw(), a.raw(), j, MPFR_RNDN);
  }
};

inline std::string ScalarOps<double>::str(double x, int digits) {
  if (digits <= 0) digits = 17;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*E", digits - 1, x);
  return buf;
}

// Minimal complex type shared by both scalar modes.
template <class R>
struct Cplx {
  R re, im;

  Cplx() = default;
  Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx conj(const Cplx& a) { return {a.re, -a.im}; }

  R abs2() const { return re * re + im * im; }
};

template <class R>
Cplx<R> make_cplx(double re, double im, unsigned prec) {
  return {ScalarOps<R>::make(re, prec), ScalarOps<R>::make(im, prec)};
}

}  // namespace pnspec
