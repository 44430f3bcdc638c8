// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "pnspec/moment_system.hpp"
#include "pnspec/scalar.hpp"

namespace pnspec {

// Legendre-Fourier coefficients u_{l,k} of one snapshot in time, in the
// unitary normalization: basis functions (1/sqrt(2pi)) e^{ikx} p_l(mu) are
// orthonormal in L^2(dmu dx), so sum |u_{l,k}|^2 over all l, k equals the
// squared L^2(dmu dx) norm.
//
// Real-valued fields satisfy u_{l,-k} = conj(u_{l,k}); only k = 0..K is
// stored and negative wavenumbers are materialized through that constraint.
template <class R>
class SpectralState {
 public:
  SpectralState() = default;
  SpectralState(int order, int modes, unsigned prec)
      : order_(order), modes_(modes), prec_(prec),
        data_(static_cast<std::size_t>(modes + 1) * (order + 1),
              make_cplx<R>(0, 0, prec)) {}

  int order() const { return order_; }
  int modes() const { return modes_; }
  unsigned precision() const { return prec_; }

  const Cplx<R>& at(int l, int k_nonneg) const {
    return data_[static_cast<std::size_t>(k_nonneg) * (order_ + 1) + l];
  }
  Cplx<R>& at(int l, int k_nonneg) {
    return data_[static_cast<std::size_t>(k_nonneg) * (order_ + 1) + l];
  }
  // any wavenumber in [-K, K], applying the reality constraint
  Cplx<R> coeff(int l, int k) const {
    if (k >= 0) return at(l, k);
    return conj(at(l, -k));
  }

  // contiguous view of one wavenumber block (length order+1)
  const Cplx<R>* block(int k_nonneg) const {
    return data_.data() + static_cast<std::size_t>(k_nonneg) * (order_ + 1);
  }
  Cplx<R>* block(int k_nonneg) {
    return data_.data() + static_cast<std::size_t>(k_nonneg) * (order_ + 1);
  }

  // Sum of |u_{l,k}|^2 over rows l in [l_lo, l_hi] and all wavenumbers.
  // Fixed reduction order: ascending l, then ascending |k| with the k > 0
  // term before k < 0 (identical magnitudes under the reality constraint).
  R norm2_rows(int l_lo, int l_hi) const {
    using S = ScalarOps<R>;
    R sum = S::make(0.0, prec_);
    if (l_lo < 0) l_lo = 0;
    if (l_hi > order_) l_hi = order_;
    for (int l = l_lo; l <= l_hi; ++l) {
      S::fma_acc(sum, at(l, 0).re, at(l, 0).re);
      S::fma_acc(sum, at(l, 0).im, at(l, 0).im);
      for (int k = 1; k <= modes_; ++k) {
        const Cplx<R>& z = at(l, k);
        // +k and -k contribution
        S::fma_acc(sum, z.re, z.re);
        S::fma_acc(sum, z.im, z.im);
        S::fma_acc(sum, z.re, z.re);
        S::fma_acc(sum, z.im, z.im);
      }
    }
    return sum;
  }
  R norm2() const { return norm2_rows(0, order_); }
  R norm() const { return ScalarOps<R>::sqrt_(norm2()); }

  // sum of k^2 |u_{l,k}|^2 over all l, k (spectral norm of the x-derivative)
  R deriv_norm2(int k_max = -1) const {
    using S = ScalarOps<R>;
    if (k_max < 0 || k_max > modes_) k_max = modes_;
    R sum = S::make(0.0, prec_);
    for (int l = 0; l <= order_; ++l) {
      for (int k = 1; k <= k_max; ++k) {
        const R w = S::make(2.0 * k * k, prec_);
        R m2 = at(l, k).abs2();
        S::fma_acc(sum, w, m2);
      }
    }
    return sum;
  }

 private:
  int order_ = 0;
  int modes_ = 0;
  unsigned prec_ = ExtendedReal::kDefaultPrecision;
  std::vector<Cplx<R>> data_;
};

// Projection P g of isotropic initial data onto the moment basis: the kinetic
// distribution g(x, mu) = G(x) has u_{0,k} = sqrt(2) Ghat_k (p_0 = 1/sqrt(2),
// integral of dmu over [-1,1] is 2) and u_{l,k} = 0 for l >= 1.
//
// `g_hat` spans k = -K..K (index k + K) and must be Hermitian-symmetric;
// asymmetric input is rejected.
template <class R>
SpectralState<R> project_isotropic(const std::vector<Cplx<R>>& g_hat,
                                   const ModelConfig& cfg, int order) {
  using S = ScalarOps<R>;
  const int K = cfg.modes;
  const unsigned prec = cfg.precision;
  if (g_hat.size() != static_cast<std::size_t>(2 * K + 1))
    throw usage_error("spectrum must span k = -K..K");
  // conj-symmetry tolerance: a few ulps of the magnitude
  const R tol = S::make(std::ldexp(4.0, -static_cast<int>(prec > 60 ? 60 : prec - 2)), prec);
  for (int k = 1; k <= K; ++k) {
    const Cplx<R>& p = g_hat[static_cast<std::size_t>(K + k)];
    const Cplx<R>& m = g_hat[static_cast<std::size_t>(K - k)];
    const Cplx<R> d = m - conj(p);
    const R scale = S::abs_(p.re) + S::abs_(p.im) + S::make(1.0, prec);
    if (tol * scale < S::sqrt_(d.abs2()))
      throw usage_error("initial spectrum is not Hermitian-symmetric");
  }
  const Cplx<R>& g0 = g_hat[static_cast<std::size_t>(K)];
  if (!(S::abs_(g0.im) <= tol * (S::abs_(g0.re) + S::make(1.0, prec))))
    throw usage_error("initial spectrum is not Hermitian-symmetric (k=0 not real)");

  SpectralState<R> st(order, K, prec);
  const R sqrt2 = S::sqrt_(S::make(2.0, prec));
  for (int k = 0; k <= K; ++k) {
    const Cplx<R>& gk = g_hat[static_cast<std::size_t>(K + k)];
    st.at(0, k) = Cplx<R>(sqrt2 * gk.re, sqrt2 * gk.im);
  }
  return st;
}

// High/low frequency split at |k| eps = 1/2; the boundary belongs to the low
// part.  The two pieces partition the state: high + low reconstructs it.
template <class R>
std::pair<SpectralState<R>, SpectralState<R>> split_frequencies(
    const SpectralState<R>& u, const Rational& eps) {
  SpectralState<R> high(u.order(), u.modes(), u.precision());
  SpectralState<R> low(u.order(), u.modes(), u.precision());
  for (int k = 0; k <= u.modes(); ++k) {
    // |k| eps <= 1/2  <=>  2 |k| num <= den
    const bool is_low = 2 * static_cast<std::int64_t>(k) * eps.num <= eps.den;
    SpectralState<R>& dst = is_low ? low : high;
    for (int l = 0; l <= u.order(); ++l) dst.at(l, k) = u.at(l, k);
  }
  return {std::move(high), std::move(low)};
}

inline bool is_low_frequency(int k, const Rational& eps) {
  return 2 * static_cast<std::int64_t>(k < 0 ? -k : k) * eps.num <= eps.den;
}

// Serialization: one row per (k, l) pair with k = -K..K, decimal scientific
// notation at round-trip precision.
void write_state(std::ostream& os, const SpectralState<double>& st);
void write_state(std::ostream& os, const SpectralState<ExtendedReal>& st);

}  // namespace pnspec
