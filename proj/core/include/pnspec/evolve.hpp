// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "pnspec/expm.hpp"
#include "pnspec/moment_system.hpp"
#include "pnspec/state.hpp"

namespace pnspec {

namespace detail {

template <class R>
bool block_is_zero(const Cplx<R>* v, int n) {
  using S = ScalarOps<R>;
  for (int i = 0; i < n; ++i)
    if (!S::is_zero_(v[i].re) || !S::is_zero_(v[i].im)) return false;
  return true;
}

// k = 0: the generator is the diagonal matrix diag(0, -1/eps^2, ...), so the
// isotropic moment is conserved exactly and every l >= 1 moment relaxes with
// the explicit factor e^{-t/eps^2}.
template <class R>
void propagate_diagonal(const ModelConfig& cfg, double t, Cplx<R>* v, int n) {
  using S = ScalarOps<R>;
  const unsigned prec = cfg.precision;
  const R eps = S::from_rational(cfg.eps, prec);
  const R factor = S::exp_(-(S::make(t, prec) / (eps * eps)));
  for (int l = 1; l < n; ++l) {
    v[l].re = v[l].re * factor;
    v[l].im = v[l].im * factor;
  }
}

}  // namespace detail

// u(t) = exp(t A_k) u(0) blockwise over wavenumbers.
template <class R>
SpectralState<R> evolve(const SpectralState<R>& st, const ModelConfig& cfg, double t) {
  if (t < 0) throw usage_error("evolution time must be nonnegative");
  SpectralState<R> out = st;
  if (t == 0) return out;
  const int n = st.order() + 1;
  for (int k = 0; k <= st.modes(); ++k) {
    Cplx<R>* v = out.block(k);
    if (detail::block_is_zero(v, n)) continue;
    if (k == 0) {
      detail::propagate_diagonal(cfg, t, v, n);
      continue;
    }
    const WaveGenerator<R> g = assemble_generator<R>(cfg, st.order(), k);
    propagate_block(g, t, cfg.precision, std::vector<Cplx<R>*>{v});
  }
  return out;
}

}  // namespace pnspec
