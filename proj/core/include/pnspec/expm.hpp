// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pnspec/errors.hpp"
#include "pnspec/moment_system.hpp"
#include "pnspec/scalar.hpp"

namespace pnspec {

template <class R>
struct CMatrix {
  int n = 0;
  std::vector<Cplx<R>> a;

  CMatrix() = default;
  CMatrix(int dim, unsigned prec)
      : n(dim), a(static_cast<std::size_t>(dim) * dim, make_cplx<R>(0, 0, prec)) {}

  Cplx<R>& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Cplx<R>& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  Cplx<R>* row(int i) { return a.data() + static_cast<std::size_t>(i) * n; }
  const Cplx<R>* row(int i) const { return a.data() + static_cast<std::size_t>(i) * n; }

  static CMatrix identity(int dim, unsigned prec) {
    CMatrix m(dim, prec);
    for (int i = 0; i < dim; ++i) m.at(i, i).re = ScalarOps<R>::make(1.0, prec);
    return m;
  }
};

namespace detail {

// exact scaling by a power of two
inline void scale2(double& x, int e) { x = std::ldexp(x, e); }
inline void scale2(ExtendedReal& x, int e) {
  mpfr_mul_2si(x.raw(), x.raw(), e, MPFR_RNDN);
}

// acc += (i * b_im) * z  for purely imaginary scalar i*b_im
template <class R>
inline void acc_imag_scalar(Cplx<R>& acc, const R& b_im, const Cplx<R>& z) {
  ScalarOps<R>::fms_acc(acc.re, b_im, z.im);
  ScalarOps<R>::fma_acc(acc.im, b_im, z.re);
}
// acc += b_re * z
template <class R>
inline void acc_real_scalar(Cplx<R>& acc, const R& b_re, const Cplx<R>& z) {
  ScalarOps<R>::fma_acc(acc.re, b_re, z.re);
  ScalarOps<R>::fma_acc(acc.im, b_re, z.im);
}

// |re| + |im| column sums -> 1-norm upper bound, full working precision
template <class R>
R norm1_bound(const CMatrix<R>& m, unsigned prec) {
  using S = ScalarOps<R>;
  R best = S::make(0.0, prec);
  R col = S::make(0.0, prec);
  for (int j = 0; j < m.n; ++j) {
    S::set_zero(col);
    for (int i = 0; i < m.n; ++i) {
      S::add_acc(col, S::abs_(m.at(i, j).re));
      S::add_acc(col, S::abs_(m.at(i, j).im));
    }
    if (best < col) best = col;
  }
  return best;
}

// Complex-symmetric square C = E * E computed on the upper triangle via
// row-by-row dot products (E[m][j] = E[j][m]), then mirrored.
template <class R>
void square_symmetric(const CMatrix<R>& e, CMatrix<R>& out, unsigned prec) {
  using S = ScalarOps<R>;
  const int n = e.n;
  R s_rr = S::make(0.0, prec), s_ii = S::make(0.0, prec);
  R s_ri = S::make(0.0, prec), s_ir = S::make(0.0, prec);
  for (int i = 0; i < n; ++i) {
    const Cplx<R>* ri = e.row(i);
    for (int j = i; j < n; ++j) {
      const Cplx<R>* rj = e.row(j);
      S::set_zero(s_rr); S::set_zero(s_ii); S::set_zero(s_ri); S::set_zero(s_ir);
      for (int m = 0; m < n; ++m) {
        S::fma_acc(s_rr, ri[m].re, rj[m].re);
        S::fma_acc(s_ii, ri[m].im, rj[m].im);
        S::fma_acc(s_ri, ri[m].re, rj[m].im);
        S::fma_acc(s_ir, ri[m].im, rj[m].re);
      }
      Cplx<R>& c = out.at(i, j);
      c.re = s_rr; S::sub_acc(c.re, s_ii);
      c.im = s_ri; S::add_acc(c.im, s_ir);
    }
  }
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) out.at(i, j) = out.at(j, i);
}

// w = E * v for dense complex E
template <class R>
void matvec(const CMatrix<R>& e, const Cplx<R>* v, Cplx<R>* w, unsigned prec) {
  using S = ScalarOps<R>;
  const int n = e.n;
  R s_rr = S::make(0.0, prec), s_ii = S::make(0.0, prec);
  R s_ri = S::make(0.0, prec), s_ir = S::make(0.0, prec);
  for (int i = 0; i < n; ++i) {
    const Cplx<R>* ri = e.row(i);
    S::set_zero(s_rr); S::set_zero(s_ii); S::set_zero(s_ri); S::set_zero(s_ir);
    for (int m = 0; m < n; ++m) {
      S::fma_acc(s_rr, ri[m].re, v[m].re);
      S::fma_acc(s_ii, ri[m].im, v[m].im);
      S::fma_acc(s_ri, ri[m].re, v[m].im);
      S::fma_acc(s_ir, ri[m].im, v[m].re);
    }
    w[i].re = s_rr; S::sub_acc(w[i].re, s_ii);
    w[i].im = s_ri; S::add_acc(w[i].im, s_ir);
  }
}

inline int choose_squarings(double norm1_times_t) {
  int s = 0;
  double x = norm1_times_t;
  while (x > 0.5 && s < 64) {
    x *= 0.5;
    ++s;
  }
  if (s >= 64) throw numeric_error("matrix exponential scaling exceeds 2^64");
  return s;
}

template <class R>
bool norm1_term_below(const CMatrix<R>& term, int bandwidth, const R& thresh,
                      unsigned prec) {
  using S = ScalarOps<R>;
  const int n = term.n;
  R col = S::make(0.0, prec);
  for (int j = 0; j < n; ++j) {
    S::set_zero(col);
    const int lo = std::max(0, j - bandwidth);
    const int hi = std::min(n - 1, j + bandwidth);
    for (int i = lo; i <= hi; ++i) {
      S::add_acc(col, S::abs_(term.at(i, j).re));
      S::add_acc(col, S::abs_(term.at(i, j).im));
    }
    if (!(col < thresh)) return false;
  }
  return true;
}

// Taylor sum of exp(B) for tridiagonal B given by bands, ||B||_1 <= 1/2.
// Terms are propagated through the band structure of B^j; iteration stops
// once the next term's 1-norm drops below 2^-(p+16).
template <class R>
CMatrix<R> taylor_exp_tridiag(const std::vector<R>& off_im, const R& diag_re,
                              int n, unsigned prec) {
  using S = ScalarOps<R>;
  CMatrix<R> e = CMatrix<R>::identity(n, prec);
  CMatrix<R> term(n, prec), next(n, prec);
  for (int i = 0; i < n; ++i) term.at(i, i).re = S::make(1.0, prec);  // B^0

  R thresh = S::make(1.0, prec);
  scale2(thresh, -static_cast<int>(prec) - 16);

  std::vector<R> offj = off_im;               // off_im / j, refreshed per term
  R diagj = diag_re;
  const Cplx<R> zero = make_cplx<R>(0, 0, prec);

  for (int j = 1; j <= 512; ++j) {
    for (std::size_t l = 0; l < offj.size(); ++l)
      S::div_ui(offj[l], off_im[l], static_cast<unsigned long>(j));
    S::div_ui(diagj, diag_re, static_cast<unsigned long>(j));

    // next = (B/j) * term ; bandwidth of term is j-1
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - j);
      const int hi = std::min(n - 1, i + j);
      Cplx<R>* dst = next.row(i);
      for (int c = lo; c <= hi; ++c) {
        dst[c] = zero;
        if (i > 0) acc_imag_scalar(dst[c], offj[static_cast<std::size_t>(i - 1)],
                                   term.at(i - 1, c));
        if (i + 1 < n) acc_imag_scalar(dst[c], offj[static_cast<std::size_t>(i)],
                                       term.at(i + 1, c));
        if (i > 0) acc_real_scalar(dst[c], diagj, term.at(i, c));
      }
    }
    std::swap(term.a, next.a);

    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - j);
      const int hi = std::min(n - 1, i + j);
      for (int c = lo; c <= hi; ++c) {
        Cplx<R>& t = term.at(i, c);
        Cplx<R>& dst = e.at(i, c);
        S::add_acc(dst.re, t.re);
        S::add_acc(dst.im, t.im);
      }
    }
    if (norm1_term_below(term, j, thresh, prec)) return e;
  }
  throw numeric_error("Taylor series for the matrix exponential did not settle");
}

}  // namespace detail

// General dense matrix exponential exp(tau * A) by scaling and squaring with
// a plain Taylor core: pick s with ||tau A||_1 / 2^s <= 1/2, sum the series
// until the next term's 1-norm is below 2^-(p+16), then square s times.
template <class R>
CMatrix<R> expm(const CMatrix<R>& a, double tau, unsigned prec) {
  using S = ScalarOps<R>;
  if (a.n <= 0) throw usage_error("matrix exponential of an empty matrix");
  if (!(tau > 0)) throw usage_error("matrix exponential requires tau > 0");
  const int n = a.n;

  const double anorm = S::to_double(detail::norm1_bound(a, prec));
  const int s = detail::choose_squarings(anorm * tau);

  R tau_r = S::make(tau, prec);
  detail::scale2(tau_r, -s);

  // B = (tau/2^s) * A
  CMatrix<R> b(n, prec);
  for (std::size_t i = 0; i < b.a.size(); ++i) {
    S::mul_set(b.a[i].re, a.a[i].re, tau_r);
    S::mul_set(b.a[i].im, a.a[i].im, tau_r);
  }

  // Taylor core (dense): T_j = B T_{j-1} / j
  CMatrix<R> e = CMatrix<R>::identity(n, prec);
  CMatrix<R> term = CMatrix<R>::identity(n, prec);
  CMatrix<R> next(n, prec);
  R thresh = S::make(1.0, prec);
  detail::scale2(thresh, -static_cast<int>(prec) - 16);
  R s_rr = S::make(0.0, prec), s_ii = S::make(0.0, prec);
  R s_ri = S::make(0.0, prec), s_ir = S::make(0.0, prec);
  bool settled = false;
  for (int j = 1; j <= 512 && !settled; ++j) {
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) {
        S::set_zero(s_rr); S::set_zero(s_ii); S::set_zero(s_ri); S::set_zero(s_ir);
        for (int m = 0; m < n; ++m) {
          const Cplx<R>& x = b.at(i, m);
          const Cplx<R>& y = term.at(m, c);
          S::fma_acc(s_rr, x.re, y.re);
          S::fma_acc(s_ii, x.im, y.im);
          S::fma_acc(s_ri, x.re, y.im);
          S::fma_acc(s_ir, x.im, y.re);
        }
        Cplx<R>& t = next.at(i, c);
        t.re = s_rr; S::sub_acc(t.re, s_ii);
        t.im = s_ri; S::add_acc(t.im, s_ir);
        S::div_ui(t.re, t.re, static_cast<unsigned long>(j));
        S::div_ui(t.im, t.im, static_cast<unsigned long>(j));
      }
    }
    std::swap(term.a, next.a);
    for (std::size_t i = 0; i < e.a.size(); ++i) {
      S::add_acc(e.a[i].re, term.a[i].re);
      S::add_acc(e.a[i].im, term.a[i].im);
    }
    settled = detail::norm1_bound(term, prec) < thresh;
  }
  if (!settled) throw numeric_error("Taylor series for the matrix exponential did not settle");

  CMatrix<R> sq(n, prec);
  for (int r = 0; r < s; ++r) {
    // the exponential of a general matrix need not be symmetric; plain square
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) {
        S::set_zero(s_rr); S::set_zero(s_ii); S::set_zero(s_ri); S::set_zero(s_ir);
        for (int m = 0; m < n; ++m) {
          const Cplx<R>& x = e.at(i, m);
          const Cplx<R>& y = e.at(m, c);
          S::fma_acc(s_rr, x.re, y.re);
          S::fma_acc(s_ii, x.im, y.im);
          S::fma_acc(s_ri, x.re, y.im);
          S::fma_acc(s_ir, x.im, y.re);
        }
        Cplx<R>& t = sq.at(i, c);
        t.re = s_rr; S::sub_acc(t.re, s_ii);
        t.im = s_ri; S::add_acc(t.im, s_ir);
      }
    }
    std::swap(e.a, sq.a);
  }
  return e;
}

// Propagation of one wavenumber block: applies exp(t A_k) to each vector in
// place.  Exploits the tridiagonal, complex-symmetric structure: banded
// Taylor core, symmetric squarings, and the final squaring replaced by two
// matrix-vector products per state vector.
template <class R>
void propagate_block(const WaveGenerator<R>& g, double t, unsigned prec,
                     const std::vector<Cplx<R>*>& vectors) {
  using S = ScalarOps<R>;
  if (!(t > 0)) return;  // exp(0) = identity
  const int n = g.dim();

  // ||A||_1 from the band structure (column sums), in double: the entries of
  // the generator stay far inside double range
  double dn = std::fabs(S::to_double(g.diag_re));
  double anorm = 0;
  for (int c = 0; c < n; ++c) {
    double col = (c >= 1) ? dn : 0.0;
    if (c >= 1) col += std::fabs(S::to_double(g.offdiag_im[static_cast<std::size_t>(c - 1)]));
    if (c < n - 1) col += std::fabs(S::to_double(g.offdiag_im[static_cast<std::size_t>(c)]));
    anorm = std::max(anorm, col);
  }
  const int s = detail::choose_squarings(anorm * t);

  R tau = S::make(t, prec);
  detail::scale2(tau, -s);

  std::vector<R> off_scaled;
  off_scaled.reserve(g.offdiag_im.size());
  for (const R& o : g.offdiag_im) off_scaled.push_back(o * tau);
  const R diag_scaled = g.diag_re * tau;

  CMatrix<R> e = detail::taylor_exp_tridiag(off_scaled, diag_scaled, n, prec);

  if (s == 0) {
    std::vector<Cplx<R>> w(static_cast<std::size_t>(n), make_cplx<R>(0, 0, prec));
    for (Cplx<R>* v : vectors) {
      detail::matvec(e, v, w.data(), prec);
      for (int i = 0; i < n; ++i) v[i] = w[i];
    }
    return;
  }

  CMatrix<R> sq(n, prec);
  for (int r = 0; r < s - 1; ++r) {
    detail::square_symmetric(e, sq, prec);
    std::swap(e.a, sq.a);
  }
  // final halving step applied as two matvecs per vector
  std::vector<Cplx<R>> w(static_cast<std::size_t>(n), make_cplx<R>(0, 0, prec));
  for (Cplx<R>* v : vectors) {
    detail::matvec(e, v, w.data(), prec);
    detail::matvec(e, w.data(), v, prec);
  }
}

}  // namespace pnspec
