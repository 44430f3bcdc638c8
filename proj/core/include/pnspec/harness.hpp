// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>
#include <vector>

#include "pnspec/bounds.hpp"
#include "pnspec/error_analysis.hpp"
#include "pnspec/evolve.hpp"
#include "pnspec/initial_data.hpp"
#include "pnspec/sha256.hpp"

namespace pnspec {

inline int env_thread_count() {
  if (const char* s = std::getenv("PNSPEC_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Spatial resolution rule: 100 modes by default, refined where steep
// x-gradients would otherwise leave visible spatial error (larger eps or
// small t), matching the reference experiments.
inline int auto_modes(double t, const Rational& eps) {
  const bool eps_half = (eps == Rational(1, 2));
  const bool eps_eighth = (eps == Rational(1, 8));
  const bool t_tenth = std::fabs(t - 0.1) < 1e-12;
  const bool t_one = std::fabs(t - 1.0) < 1e-12;
  if (t_tenth && eps_half) return 2500;
  if (t_tenth && eps_eighth) return 1000;
  if (t_one && eps_half) return 1000;
  return 100;
}

// The eps sweep of the convergence studies: eps = 2 * 4^{-m}, m = 1..count.
inline std::vector<Rational> eps_sweep(int count = 5) {
  std::vector<Rational> out;
  std::int64_t den = 2;  // 2 * 4^{-1} = 1/2
  for (int m = 1; m <= count; ++m) {
    out.emplace_back(1, den);
    den *= 4;
  }
  return out;
}

// Quantity selector for the ratio studies.
struct RatioQuantity {
  bool moment = false;
  int l = 0;
  static RatioQuantity total() { return {false, 0}; }
  static RatioQuantity moment_l(int l) { return {true, l}; }
  std::string name() const { return moment ? "m" + std::to_string(l) : "total"; }
};

// Cached solve driver.  States are keyed by (initial condition, order, eps,
// t, modes); one batched pass per (eps, t, modes) shares each wavenumber
// exponential across initial conditions and reuses it for every pending
// moment order.
template <class R>
class Harness {
 public:
  explicit Harness(unsigned precision = ExtendedReal::kDefaultPrecision,
                   int order_ref = 65)
      : precision_(precision), order_ref_(order_ref) {}

  unsigned precision() const { return precision_; }
  int reference_order() const { return order_ref_; }
  void set_threads(int n) { threads_ = n; }
  void set_progress(std::function<void(const std::string&)> cb) { progress_ = std::move(cb); }

  const SpectralState<R>& state(const InitialCondition& ic, int order,
                                const Rational& eps, double t, int modes) {
    prepare({ic}, {order}, eps, t, modes);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.at(key(ic, order, eps, t, modes));
  }

  const SpectralState<R>& reference(const InitialCondition& ic, const Rational& eps,
                                    double t, int modes) {
    return state(ic, order_ref_, eps, t, modes);
  }

  // initial data at the working precision, projected to the given order
  SpectralState<R> initial_state(const InitialCondition& ic, int order, int modes) const {
    ModelConfig cfg = make_config(order, Rational(1, 2), modes);
    const auto spectrum = fourier_coefficients<R>(ic, modes, precision_);
    return project_isotropic<R>(spectrum, cfg, order);
  }

  // Solve every missing (ic, order) pair at (eps, t, modes) in one blockwise
  // pass over wavenumbers.
  void prepare(const std::vector<InitialCondition>& ics, std::vector<int> orders,
               const Rational& eps, double t, int modes) {
    struct Pending {
      std::size_t ic_idx;
      int order;
      SpectralState<R> st;
      Key k;
    };
    std::vector<Pending> pending;
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (std::size_t i = 0; i < ics.size(); ++i) {
        for (int order : orders) {
          Key kk = key(ics[i], order, eps, t, modes);
          if (cache_.count(kk)) continue;
          bool dup = false;
          for (const Pending& p : pending)
            if (p.k == kk) { dup = true; break; }
          if (!dup) pending.push_back(Pending{i, order, SpectralState<R>(), kk});
        }
      }
    }
    if (pending.empty()) return;

    // project initial data once per distinct ic
    std::map<std::size_t, std::vector<Cplx<R>>> spectra;
    for (const Pending& p : pending)
      if (!spectra.count(p.ic_idx))
        spectra.emplace(p.ic_idx, fourier_coefficients<R>(ics[p.ic_idx], modes, precision_));
    for (Pending& p : pending) {
      ModelConfig cfg = make_config(p.order, eps, modes);
      p.st = project_isotropic<R>(spectra.at(p.ic_idx), cfg, p.order);
    }

    if (t > 0) {
      if (progress_)
        progress_("solve eps=" + eps.str() + " t=" + std::to_string(t) +
                  " modes=" + std::to_string(modes) + " states=" + std::to_string(pending.size()));
      // distinct orders, each applied to all pending states of that order
      std::vector<int> distinct;
      for (const Pending& p : pending)
        if (std::find(distinct.begin(), distinct.end(), p.order) == distinct.end())
          distinct.push_back(p.order);

      ModelConfig cfg = make_config(1, eps, modes);
      std::atomic<int> next_k{0};
      auto worker = [&]() {
        for (;;) {
          const int k = next_k.fetch_add(1);
          if (k > modes) return;
          for (int order : distinct) {
            std::vector<Cplx<R>*> vecs;
            for (Pending& p : pending) {
              if (p.order != order) continue;
              Cplx<R>* v = p.st.block(k);
              if (!detail::block_is_zero(v, order + 1)) vecs.push_back(v);
            }
            if (vecs.empty()) continue;
            if (k == 0) {
              for (Cplx<R>* v : vecs) detail::propagate_diagonal(cfg, t, v, order + 1);
            } else {
              const WaveGenerator<R> g = assemble_generator<R>(cfg, order, k);
              propagate_block(g, t, precision_, vecs);
            }
          }
        }
      };
      int nthreads = threads_ > 0 ? threads_ : env_thread_count();
      nthreads = std::min(nthreads, modes + 1);
      if (nthreads <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }
    }

    std::lock_guard<std::mutex> lock(mu_);
    for (Pending& p : pending) cache_.emplace(std::move(p.k), std::move(p.st));
  }

  // Errors of the P_N family against the P_{order_ref} reference, table
  // convention, for N = n_lo..n_hi.
  std::vector<double> error_sequence(const InitialCondition& ic, int n_lo, int n_hi,
                                     const Rational& eps, double t, int modes,
                                     const RatioQuantity& q) {
    std::vector<int> orders;
    for (int n = n_lo; n <= n_hi; ++n) orders.push_back(n);
    orders.push_back(order_ref_);
    prepare({ic}, orders, eps, t, modes);
    const SpectralState<R>& ref = state(ic, order_ref_, eps, t, modes);
    std::vector<double> out;
    for (int n = n_lo; n <= n_hi; ++n) {
      const SpectralState<R>& app = state(ic, n, eps, t, modes);
      const R e = q.moment ? moment_error(ref, app, q.l) : l2_error(ref, app);
      out.push_back(ScalarOps<R>::to_double(e));
    }
    return out;
  }

  ConvergenceTable total_error_table(const InitialCondition& ic, int n_max, double t,
                                     int modes_override = 0) {
    if (n_max < 1) throw usage_error("table needs Nmax >= 1");
    if (n_max >= order_ref_) throw usage_error("table Nmax must be below the reference order");
    ConvergenceTable tab;
    tab.ic = ic.name();
    tab.t = t;
    tab.quantity = "total";
    tab.eps_rows = eps_sweep();
    for (int n = 1; n <= n_max; ++n) tab.col_labels.push_back("P" + std::to_string(n));
    for (const Rational& eps : tab.eps_rows) {
      const int modes = modes_override > 0 ? modes_override : auto_modes(t, eps);
      std::vector<int> orders;
      for (int n = 1; n <= n_max; ++n) orders.push_back(n);
      orders.push_back(order_ref_);
      prepare({ic}, orders, eps, t, modes);
      const SpectralState<R>& ref = state(ic, order_ref_, eps, t, modes);
      const double scale =
          ScalarOps<R>::to_double(ref.norm() * table_norm_factor<R>(precision_));
      const double floor = precision_floor(precision_, scale);
      std::vector<typename ConvergenceTable::Cell> row;
      for (int n = 1; n <= n_max; ++n) {
        const SpectralState<R>& app = state(ic, n, eps, t, modes);
        const R e = l2_error(ref, app);
        row.push_back(make_cell(e, floor));
      }
      tab.cells.push_back(std::move(row));
    }
    tab.compute_orders();
    return tab;
  }

  // columns xi_0..xi_N for the P_N solve (errors of each coefficient)
  ConvergenceTable moment_error_table(const InitialCondition& ic, int order, double t,
                                      int modes_override = 0) {
    check_moment_order(order);
    ConvergenceTable tab;
    tab.ic = ic.name();
    tab.t = t;
    tab.quantity = "moment";
    tab.fixed_order = order;
    tab.eps_rows = eps_sweep();
    for (int l = 0; l <= order; ++l) tab.col_labels.push_back("xi" + std::to_string(l));
    for (const Rational& eps : tab.eps_rows) {
      const int modes = modes_override > 0 ? modes_override : auto_modes(t, eps);
      prepare({ic}, {order, order_ref_}, eps, t, modes);
      const SpectralState<R>& ref = state(ic, order_ref_, eps, t, modes);
      const SpectralState<R>& app = state(ic, order, eps, t, modes);
      const double scale =
          ScalarOps<R>::to_double(ref.norm() * table_norm_factor<R>(precision_));
      const double floor = precision_floor(precision_, scale);
      std::vector<typename ConvergenceTable::Cell> row;
      for (int l = 0; l <= order; ++l)
        row.push_back(make_cell(moment_error(ref, app, l), floor));
      tab.cells.push_back(std::move(row));
    }
    tab.compute_orders();
    return tab;
  }

  // columns ||f_0||..||f_N|| of the P_N solution itself
  ConvergenceTable coefficient_table(const InitialCondition& ic, int order, double t,
                                     int modes_override = 0) {
    check_moment_order(order);
    ConvergenceTable tab;
    tab.ic = ic.name();
    tab.t = t;
    tab.quantity = "coeff";
    tab.fixed_order = order;
    tab.eps_rows = eps_sweep();
    for (int l = 0; l <= order; ++l) tab.col_labels.push_back("f" + std::to_string(l));
    for (const Rational& eps : tab.eps_rows) {
      const int modes = modes_override > 0 ? modes_override : auto_modes(t, eps);
      prepare({ic}, {order}, eps, t, modes);
      const SpectralState<R>& app = state(ic, order, eps, t, modes);
      const double scale =
          ScalarOps<R>::to_double(app.norm() * table_norm_factor<R>(precision_));
      const double floor = precision_floor(precision_, scale);
      std::vector<typename ConvergenceTable::Cell> row;
      for (int l = 0; l <= order; ++l)
        row.push_back(make_cell(coefficient_norm(app, l), floor));
      tab.cells.push_back(std::move(row));
    }
    tab.compute_orders();
    return tab;
  }

  // (N, raw, normalized) ratio rows e^{N+1}/e^N for N = first..n_max
  std::vector<RatioRow> ratio_profile(const InitialCondition& ic, double t,
                                      const Rational& eps, int n_max,
                                      const RatioQuantity& q, int modes_override = 0) {
    if (n_max < 1) throw usage_error("ratio profile needs Nmax >= 1");
    const int first = q.moment ? std::max(1, q.l) : 1;
    if (n_max + 1 >= order_ref_)
      throw usage_error("ratio profile Nmax must stay below the reference order");
    const int modes = modes_override > 0 ? modes_override : auto_modes(t, eps);
    const std::vector<double> errs =
        error_sequence(ic, first, n_max + 1, eps, t, modes, q);
    const SpectralState<R>& ref = state(ic, order_ref_, eps, t, modes);
    const double scale =
        ScalarOps<R>::to_double(ref.norm() * table_norm_factor<R>(precision_));
    const double floor = precision_floor(precision_, scale);
    return ratios_from_errors(errs, eps.value(), q.moment, floor, first);
  }

  void clear_cache() {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.clear();
  }
  std::size_t cache_entries() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
  }

  ModelConfig make_config(int order, const Rational& eps, int modes) const {
    ModelConfig cfg;
    cfg.order = order;
    cfg.eps = eps;
    cfg.modes = modes;
    cfg.order_ref = order_ref_;
    cfg.precision = precision_;
    return cfg;
  }

 private:
  using Key = std::tuple<std::string, int, std::int64_t, std::int64_t,
                         std::uint64_t, int>;

  Key key(const InitialCondition& ic, int order, const Rational& eps, double t,
          int modes) const {
    std::uint64_t tbits = 0;
    std::memcpy(&tbits, &t, sizeof tbits);
    std::string name = ic.name();
    if (ic.kind == ICKind::sampled)
      name += ":" + sha256_hex(ic.samples.data(),
                               ic.samples.size() * sizeof(ic.samples[0]));
    return {std::move(name), order, eps.num, eps.den, tbits, modes};
  }

  typename ConvergenceTable::Cell make_cell(const R& value, double floor) const {
    typename ConvergenceTable::Cell c;
    c.value = ScalarOps<R>::to_double(value);
    c.value_full = ScalarOps<R>::str(value, 0);
    c.below_floor = !(c.value > floor);
    return c;
  }

  void check_moment_order(int order) const {
    if (order < 1) throw usage_error("moment table needs N >= 1");
    if (order >= order_ref_) throw usage_error("moment table N must be below the reference order");
  }

  unsigned precision_;
  int order_ref_;
  int threads_ = 0;  // 0: PNSPEC_THREADS or hardware default
  std::function<void(const std::string&)> progress_;
  mutable std::mutex mu_;
  std::map<Key, SpectralState<R>> cache_;
};

// Bound verification for one configuration: Theorem-level total and
// per-moment checks plus pointwise energy/coefficient spot checks of the
// decay lemmas (applied to the P_N coefficients as the theory's proxy).
template <class R>
std::vector<BoundCheck> run_bounds(Harness<R>& h, const InitialCondition& ic, int order,
                                   const Rational& eps, double t, int modes_override = 0) {
  using S = ScalarOps<R>;
  const unsigned prec = h.precision();
  const int modes = modes_override > 0 ? modes_override : auto_modes(t, eps);
  const TheoryConstants<R> tc = TheoryConstants<R>::make(prec);

  std::vector<int> orders{order, h.reference_order()};
  h.prepare({ic}, orders, eps, t, modes);
  const SpectralState<R>& ref = h.state(ic, h.reference_order(), eps, t, modes);
  const SpectralState<R>& app = h.state(ic, order, eps, t, modes);
  const SpectralState<R> g = h.initial_state(ic, order, modes);

  std::vector<BoundCheck> out;
  out.push_back(total_error_bound(g, l2_distance(ref, app), order, t, eps, tc));
  for (int l = 0; l <= order; ++l)
    out.push_back(moment_error_bound(g, moment_distance(ref, app, l), order, l, t, eps, tc));

  // Lemma-level spot checks on the evolved P_N coefficients
  const R e = S::from_rational(eps, prec);
  const R tt = S::make(t, prec);
  std::vector<int> ks{1};
  // first high-frequency wavenumber, when represented
  for (int k = 1; k <= modes; ++k)
    if (!is_low_frequency(k, eps)) { ks.push_back(k); break; }
  for (int k : ks) {
    const R hg = energy(g, k, 0);
    const R hf = energy(app, k, 0);
    BoundCheck bc;
    bc.quantity = "energy k=" + std::to_string(k);
    R bound = S::make(0.0, prec);
    if (is_low_frequency(k, eps)) {
      bound = S::make(6.0, prec) *
              S::exp_(S::make(-2.0 * k * k, prec) * tc.lambda2 * tt) * hg;
    } else {
      bound = S::make(6.0, prec) * S::exp_(S::make(-2.0, prec) * tc.lambda1 * tt / (e * e)) * hg;
    }
    detail::finish_check(bc, hf, bound);
    out.push_back(bc);
  }
  // pointwise coefficient decay at k = 1 (low frequency for eps <= 1/2)
  if (is_low_frequency(1, eps)) {
    for (int l = 0; l <= std::min(order, 3); ++l) {
      BoundCheck bc;
      bc.quantity = "coeff l=" + std::to_string(l) + " k=1";
      const R computed = S::sqrt_(app.at(l, 1).abs2());
      const R bound = pointwise_coefficient(g, l, 1, tc) * S::pow_i(e, l) *
                      S::exp_(-(tc.lambda2 * tt));
      detail::finish_check(bc, computed, bound);
      out.push_back(bc);
    }
  }
  return out;
}

}  // namespace pnspec
