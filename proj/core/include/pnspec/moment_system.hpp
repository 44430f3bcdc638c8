// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "pnspec/errors.hpp"
#include "pnspec/rational.hpp"
#include "pnspec/scalar.hpp"

namespace pnspec {

// Coupling coefficient of the three-term recurrence for orthonormal Legendre
// polynomials: mu p_l = a_l p_{l+1} + a_{l-1} p_{l-1},
// a_l = (l+1) / sqrt((2l+1)(2l+3)).  Strictly decreasing, 1/2 < a_l <= 1/sqrt(3).
template <class R>
R coupling(long l, unsigned prec) {
  using S = ScalarOps<R>;
  if (l < 0) throw usage_error("coupling index must be nonnegative");
  const R num = S::make(static_cast<double>(l + 1), prec);
  const R p = S::make(static_cast<double>(2 * l + 1), prec) *
              S::make(static_cast<double>(2 * l + 3), prec);
  return num / S::sqrt_(p);
}

inline double coupling_d(long l) { return coupling<double>(l, 53); }

// Run configuration shared by the solver and the table/figure drivers.
struct ModelConfig {
  int order = 1;              // moment cutoff N (N+1 moments)
  Rational eps{1, 1};         // scaling parameter
  int modes = 100;            // Fourier cutoff K; wavenumbers k = -K..K
  int order_ref = 65;         // reference solution order
  unsigned precision = ExtendedReal::kDefaultPrecision;  // bits; 0 = native double
  std::vector<double> times{1.0};

  void validate() const {
    if (order < 1) throw usage_error("moment order must be >= 1");
    if (order_ref <= order) throw usage_error("reference order must exceed N");
    if (!eps.positive() || Rational{1, 1} < eps)
      throw usage_error("scaling parameter must satisfy 0 < eps <= 1");
    if (modes < 1) throw usage_error("Fourier cutoff must be >= 1");
    for (double t : times)
      if (t < 0) throw usage_error("times must be nonnegative");
  }
};

// Generator of the per-wavenumber moment ODE system,
//   A_k = -(i k / eps) M - (1/eps^2) R,
// with M symmetric tridiagonal carrying a_0..a_{N-1} on the off-diagonals and
// R = diag(0, 1, ..., 1).  Only the imaginary off-diagonal band and the real
// diagonal are stored; A_k is complex symmetric and satisfies
// A_k + A_k^H = -(2/eps^2) R.
template <class R>
struct WaveGenerator {
  int order = 0;  // matrix dimension is order+1
  int k = 0;
  std::vector<R> offdiag_im;  // entry l: Im(A[l][l+1]) = -(k/eps) a_l, l = 0..order-1
  R diag_re;                  // A[l][l] = diag_re for l >= 1; A[0][0] = 0

  int dim() const { return order + 1; }

  // Dense (order+1)^2 matrix, row-major.
  std::vector<Cplx<R>> dense(unsigned prec) const {
    using S = ScalarOps<R>;
    const int n = dim();
    std::vector<Cplx<R>> a(static_cast<std::size_t>(n) * n, make_cplx<R>(0, 0, prec));
    for (int l = 0; l + 1 < n; ++l) {
      a[static_cast<std::size_t>(l) * n + l + 1].im = offdiag_im[static_cast<std::size_t>(l)];
      a[static_cast<std::size_t>(l + 1) * n + l].im = offdiag_im[static_cast<std::size_t>(l)];
    }
    for (int l = 1; l < n; ++l)
      a[static_cast<std::size_t>(l) * n + l].re = diag_re;
    return a;
  }
};

// Closure by truncation: the last row omits the a_N coupling, which is the
// sole difference from the first N+1 rows of the untruncated hierarchy.
template <class R>
WaveGenerator<R> assemble_generator(const ModelConfig& cfg, int order, int k) {
  using S = ScalarOps<R>;
  if (order < 1) throw usage_error("generator order must be >= 1");
  if (k < -cfg.modes || k > cfg.modes) throw usage_error("wavenumber outside |k| <= K");
  const unsigned prec = cfg.precision;
  WaveGenerator<R> g;
  g.order = order;
  g.k = k;
  const R eps = S::from_rational(cfg.eps, prec);
  const R k_over_eps = S::make(static_cast<double>(k), prec) / eps;
  g.offdiag_im.reserve(static_cast<std::size_t>(order));
  for (int l = 0; l < order; ++l)
    g.offdiag_im.push_back(-(k_over_eps * coupling<R>(l, prec)));
  g.diag_re = -(S::make(1.0, prec) / (eps * eps));
  return g;
}

}  // namespace pnspec
