// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pnspec/rational.hpp"
#include "pnspec/state.hpp"

namespace pnspec {

// Unitary L2(dmu dx) distance between a reference state and a lower-order
// approximation, zero-padding the approximation in l (Parseval).  Reduction
// order is fixed: ascending l, then ascending |k| with +k before -k.
template <class R>
R l2_distance(const SpectralState<R>& ref, const SpectralState<R>& approx) {
  using S = ScalarOps<R>;
  if (ref.modes() != approx.modes())
    throw usage_error("states carry different Fourier cutoffs");
  if (ref.order() < approx.order())
    throw usage_error("reference order must be >= approximation order");
  const unsigned prec = ref.precision();
  R sum = S::make(0.0, prec);
  for (int l = 0; l <= ref.order(); ++l) {
    for (int k = 0; k <= ref.modes(); ++k) {
      Cplx<R> d = ref.at(l, k);
      if (l <= approx.order()) d = d - approx.at(l, k);
      const R w = S::make(k == 0 ? 1.0 : 2.0, prec);
      R m2 = d.abs2();
      S::fma_acc(sum, w, m2);
    }
  }
  return S::sqrt_(sum);
}

// per-coefficient distance ||xi_l||: l2 over wavenumbers of row l
template <class R>
R moment_distance(const SpectralState<R>& ref, const SpectralState<R>& approx, int l) {
  using S = ScalarOps<R>;
  if (ref.modes() != approx.modes())
    throw usage_error("states carry different Fourier cutoffs");
  if (l < 0 || l > approx.order())
    throw usage_error("moment index outside the approximation order");
  const unsigned prec = ref.precision();
  R sum = S::make(0.0, prec);
  for (int k = 0; k <= ref.modes(); ++k) {
    const Cplx<R> d = ref.at(l, k) - approx.at(l, k);
    const R w = S::make(k == 0 ? 1.0 : 2.0, prec);
    R m2 = d.abs2();
    S::fma_acc(sum, w, m2);
  }
  return S::sqrt_(sum);
}

// The published reference tables report mean-square-in-x norms: the unitary
// coefficient norm divided by sqrt(2 pi) (equivalently, the l2 norm of plain
// Fourier-series coefficients).  Error values meant for table comparison go
// through this normalization.
template <class R>
R table_norm_factor(unsigned prec) {
  using S = ScalarOps<R>;
  return S::make(1.0, prec) / S::sqrt_(S::make(2.0, prec) * S::pi(prec));
}

template <class R>
R l2_error(const SpectralState<R>& ref, const SpectralState<R>& approx) {
  return l2_distance(ref, approx) * table_norm_factor<R>(ref.precision());
}

template <class R>
R moment_error(const SpectralState<R>& ref, const SpectralState<R>& approx, int l) {
  return moment_distance(ref, approx, l) * table_norm_factor<R>(ref.precision());
}

// ||f_l||: l2 over wavenumbers of row l of a single state, table convention
template <class R>
R coefficient_norm(const SpectralState<R>& st, int l) {
  using S = ScalarOps<R>;
  if (l < 0 || l > st.order()) throw usage_error("moment index out of range");
  return S::sqrt_(st.norm2_rows(l, l)) * table_norm_factor<R>(st.precision());
}

// log(err_coarse / err_fine) / log(ratio); NaN marks an undefined order
// (vanishing or invalid errors).
inline double observed_order(double err_coarse, double err_fine, double ratio) {
  if (!(err_coarse > 0) || !(err_fine > 0) || !(ratio > 1))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

// Rounding-noise floor for reported errors: anything below
// 10^(2 - p log10 2) * scale is indistinguishable from round-off.
inline double precision_floor(unsigned precision_bits, double scale) {
  const double digits = precision_bits * 0.301029995663981195;
  const double exp10 = 2.0 - digits;
  if (exp10 < -300.0) return 0.0;
  return std::pow(10.0, exp10) * scale;
}

// Least-squares slope q of log(error) against log(N); errors are listed for
// N = 1, 2, ..., in order.  Returns q > 0 for decaying errors.
inline double algebraic_rate_fit(const std::vector<double>& errors_by_order) {
  const std::size_t n = errors_by_order.size();
  if (n < 4) throw usage_error("algebraic rate fit needs at least 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors_by_order[i] > 0))
      throw numeric_error("algebraic rate fit requires positive errors");
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(errors_by_order[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = static_cast<double>(n);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

// Error/rate grid in the layout of the published tables: rows are the eps
// sweep, columns are P_N orders (total error) or moment indices.
struct ConvergenceTable {
  std::string ic;
  double t = 1.0;
  std::string quantity;  // "total", "moment", "coeff"
  int fixed_order = -1;  // N for moment/coeff tables
  std::vector<Rational> eps_rows;
  std::vector<std::string> col_labels;

  struct Cell {
    double value = 0.0;
    std::string value_full;  // full-precision decimal
    double order = std::numeric_limits<double>::quiet_NaN();
    bool has_order = false;
    bool below_floor = false;
  };
  std::vector<std::vector<Cell>> cells;  // [row][col]

  // fill order entries between adjacent eps rows (ratio from the sweep);
  // below-floor cells neither receive nor provide orders
  void compute_orders() {
    for (std::size_t r = 1; r < eps_rows.size(); ++r) {
      const double ratio = eps_rows[r - 1].value() / eps_rows[r].value();
      for (std::size_t c = 0; c < cells[r].size(); ++c) {
        Cell& cur = cells[r][c];
        const Cell& prev = cells[r - 1][c];
        if (cur.below_floor || prev.below_floor) continue;
        const double q = observed_order(prev.value, cur.value, ratio);
        if (std::isfinite(q)) {
          cur.order = q;
          cur.has_order = true;
        }
      }
    }
  }

  void write_csv(std::ostream& os, int digits = 6) const;
  void write_markdown(std::ostream& os) const;
};

// ratio rows produced by the N-sweep studies; value columns may be flagged
// instead of dropped when a denominator sits below the precision floor
struct RatioRow {
  int order = 0;          // N of the ratio e^{N+1}/e^N
  double raw = 0.0;       // ||e^{N+1}|| / ||e^N||
  double normalized = 0;  // raw / eps (total) or raw / eps^2 (moment)
  bool below_floor = false;
};

// ratios from an error sequence indexed N = first_order..first_order+len-1
inline std::vector<RatioRow> ratios_from_errors(const std::vector<double>& errors,
                                                double eps, bool moment_quantity,
                                                double floor, int first_order = 1) {
  std::vector<RatioRow> rows;
  const double norm = moment_quantity ? eps * eps : eps;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    RatioRow r;
    r.order = first_order + static_cast<int>(i);
    if (!(errors[i] > floor) || !(errors[i + 1] >= 0)) {
      r.below_floor = true;
      r.raw = r.normalized = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.raw = errors[i + 1] / errors[i];
      r.normalized = r.raw / norm;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pnspec
