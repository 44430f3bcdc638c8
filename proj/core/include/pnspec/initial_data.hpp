// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pnspec/errors.hpp"
#include "pnspec/scalar.hpp"

namespace pnspec {

// Benchmark initial profiles on [-pi, pi):
//   g1(x) = 1 + indicator[-pi/2, pi/2](x)
//   g2(x) = 1 + cos(x) * indicator[-pi/2, pi/2](x)
//   g3(x) = 1 + cos(x)
// plus user-sampled isotropic data on a uniform grid.
enum class ICKind { g1, g2, g3, sampled };

struct InitialCondition {
  ICKind kind = ICKind::g3;
  std::vector<std::pair<double, double>> samples;  // (x, value), kind == sampled

  std::string name() const {
    switch (kind) {
      case ICKind::g1: return "g1";
      case ICKind::g2: return "g2";
      case ICKind::g3: return "g3";
      default: return "sampled";
    }
  }

  static InitialCondition analytic(ICKind k) {
    if (k == ICKind::sampled) throw usage_error("sampled data needs samples");
    InitialCondition ic;
    ic.kind = k;
    return ic;
  }
  // Uniform grid on [-pi, pi) with power-of-two length.
  static InitialCondition from_samples(std::vector<std::pair<double, double>> pts);
};

// Sobolev regularity threshold of the analytic profiles: g1 is in H^q(dx)
// for q < 1/2, g2 for q < 3/2, g3 is smooth (reported as +infinity).
inline double regularity_report(const InitialCondition& ic) {
  switch (ic.kind) {
    case ICKind::g1: return 0.5;
    case ICKind::g2: return 1.5;
    case ICKind::g3: return std::numeric_limits<double>::infinity();
    default:
      throw usage_error("regularity of sampled data is unknown");
  }
}

namespace detail {

// sin(k pi/2) and cos(k pi/2) are exact integers in {-1, 0, 1}
inline int sin_half_pi(long k) {
  const long m = ((k % 4) + 4) % 4;
  return m == 1 ? 1 : (m == 3 ? -1 : 0);
}
inline int cos_half_pi(long k) {
  const long m = ((k % 4) + 4) % 4;
  return m == 0 ? 1 : (m == 2 ? -1 : 0);
}

}  // namespace detail

// Fourier coefficients Ghat_k = (1/sqrt(2pi)) \int G(x) e^{-ikx} dx for
// k = -K..K (index k + K).  The analytic profiles use closed forms; all three
// are even in x, so their coefficients are real.  Sampled data goes through a
// discrete Fourier transform of the grid values.
template <class R>
std::vector<Cplx<R>> fourier_coefficients(const InitialCondition& ic, int K,
                                          unsigned prec) {
  using S = ScalarOps<R>;
  if (K < 1) throw usage_error("Fourier cutoff must be >= 1");
  const R pi = S::pi(prec);
  const R two_pi = S::make(2.0, prec) * pi;
  const R inv_root = S::make(1.0, prec) / S::sqrt_(two_pi);
  std::vector<Cplx<R>> out(static_cast<std::size_t>(2 * K + 1),
                           make_cplx<R>(0, 0, prec));
  auto set_real = [&](int k, R v) {
    out[static_cast<std::size_t>(K + k)].re = std::move(v);
  };

  switch (ic.kind) {
    case ICKind::g1: {
      set_real(0, S::make(3.0, prec) * pi * inv_root);
      for (int k = 1; k <= K; ++k) {
        const int s = detail::sin_half_pi(k);
        if (s == 0) continue;
        R v = S::make(2.0 * s / static_cast<double>(k), prec) * inv_root;
        set_real(k, v);
        set_real(-k, std::move(v));
      }
      break;
    }
    case ICKind::g2: {
      set_real(0, (S::make(2.0, prec) * pi + S::make(2.0, prec)) * inv_root);
      {
        R v = pi * S::make(0.5, prec) * inv_root;
        set_real(1, v);
        set_real(-1, std::move(v));
      }
      for (int k = 2; k <= K; ++k) {
        const int c = detail::cos_half_pi(k);
        if (c == 0) continue;
        R v = S::make(2.0 * c / (1.0 - static_cast<double>(k) * k), prec) * inv_root;
        set_real(k, v);
        set_real(-k, std::move(v));
      }
      break;
    }
    case ICKind::g3: {
      set_real(0, two_pi * inv_root);  // sqrt(2 pi)
      R v = pi * inv_root;
      set_real(1, v);
      set_real(-1, std::move(v));
      break;
    }
    case ICKind::sampled: {
      const long M = static_cast<long>(ic.samples.size());
      if (2L * K > M)
        throw usage_error("Fourier cutoff exceeds the sample resolution (need 2K <= #samples)");
      // Ghat_k ~ (sqrt(2pi)/M) sum_j G(x_j) e^{-ik x_j}
      const R weight = S::sqrt_(two_pi) / S::make(static_cast<double>(M), prec);
      for (long j = 0; j < M; ++j) {
        const R xj = S::make(ic.samples[static_cast<std::size_t>(j)].first, prec);
        const R gj = S::make(ic.samples[static_cast<std::size_t>(j)].second, prec);
        // w = e^{-i x_j}, stepped by multiplication across k
        const Cplx<R> w{S::cos_(xj), -S::sin_(xj)};
        Cplx<R> wk = make_cplx<R>(1, 0, prec);
        for (int k = 0; k <= K; ++k) {
          Cplx<R>& dst = out[static_cast<std::size_t>(K + k)];
          dst.re = dst.re + gj * wk.re;
          dst.im = dst.im + gj * wk.im;
          wk = wk * w;
        }
      }
      for (int k = 0; k <= K; ++k) {
        Cplx<R>& p = out[static_cast<std::size_t>(K + k)];
        p.re = p.re * weight;
        p.im = p.im * weight;
        if (k > 0) out[static_cast<std::size_t>(K - k)] = conj(p);
      }
      // grid values are real; the k=0 coefficient is real up to rounding
      ScalarOps<R>::set_zero(out[static_cast<std::size_t>(K)].im);
      break;
    }
  }
  return out;
}

inline InitialCondition InitialCondition::from_samples(
    std::vector<std::pair<double, double>> pts) {
  const std::size_t m = pts.size();
  if (m < 4 || (m & (m - 1)) != 0)
    throw usage_error("sampled grid length must be a power of two (>= 4)");
  const double h = 2.0 * M_PI / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double expect = -M_PI + h * static_cast<double>(j);
    if (std::fabs(pts[j].first - expect) > 1e-9 * (1.0 + std::fabs(expect)))
      throw usage_error("samples must lie on the uniform grid over [-pi, pi)");
  }
  InitialCondition ic;
  ic.kind = ICKind::sampled;
  ic.samples = std::move(pts);
  return ic;
}

}  // namespace pnspec
