// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pnspec/harness.hpp"
#include "pnspec/manifest.hpp"

namespace pnspec {
namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  unsigned precision = ExtendedReal::kDefaultPrecision;  // 0 selects native double
  int modes = 0;    // 0: resolution rule
  int digits = 6;
  int threads = 0;  // 0: PNSPEC_THREADS / hardware
  std::string out_dir = ".";
  bool quiet = false;
};

InitialCondition parse_ic(const std::string& spec) {
  if (spec == "g1") return InitialCondition::analytic(ICKind::g1);
  if (spec == "g2") return InitialCondition::analytic(ICKind::g2);
  if (spec == "g3") return InitialCondition::analytic(ICKind::g3);
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open sample file: " + path);
    std::vector<std::pair<double, double>> pts;
    double x, v;
    while (in >> x >> v) pts.emplace_back(x, v);
    return InitialCondition::from_samples(std::move(pts));
  }
  throw usage_error("initial condition must be g1, g2, g3, or file:<path>");
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string path_join(const std::string& dir, const std::string& name) {
  return dir.empty() || dir == "." ? name : dir + "/" + name;
}

std::string t_tag(double t) {
  std::ostringstream os;
  os << t;
  std::string s = os.str();
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

void progress_printer(const std::string& msg) { std::cerr << "[pnspec] " << msg << "\n"; }

template <class R>
Harness<R> make_harness(const CommonOpts& common, int order_ref) {
  Harness<R> h(common.precision == 0 ? 53 : common.precision, order_ref);
  h.set_threads(common.threads);
  if (!common.quiet) h.set_progress(progress_printer);
  return h;
}

struct SolveArgs {
  std::string ic;
  int order = 1;
  std::string eps = "1";
  double t = 1.0;
  std::string out = "state.txt";
  int order_ref = 65;
};

template <class R>
int cmd_solve(const SolveArgs& a, const CommonOpts& common, const std::string& cmdline) {
  const auto t0 = std::chrono::steady_clock::now();
  const InitialCondition ic = parse_ic(a.ic);
  const Rational eps = Rational::parse(a.eps);
  const int modes = common.modes > 0 ? common.modes : auto_modes(a.t, eps);

  ModelConfig cfg;
  cfg.order = a.order;
  cfg.eps = eps;
  cfg.modes = modes;
  cfg.order_ref = a.order_ref;
  cfg.precision = common.precision == 0 ? 53 : common.precision;
  cfg.times = {a.t};
  cfg.validate();

  Harness<R> h = make_harness<R>(common, a.order_ref);
  const SpectralState<R>& st = h.state(ic, a.order, eps, a.t, modes);

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  std::ofstream os(a.out);
  if (!os) throw usage_error("cannot open output file: " + a.out);
  write_state(os, st);
  os.close();

  RunManifest m;
  m.command_line = cmdline;
  m.add("ic", ic.name());
  m.add("order", std::to_string(a.order));
  m.add("eps", eps.str());
  m.add("t", std::to_string(a.t));
  m.add("modes", std::to_string(modes));
  m.add("precision", common.precision == 0 ? "double" : std::to_string(common.precision));
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs.push_back(a.out);
  m.append_to(out_path.has_parent_path() ? out_path.parent_path().string() : ".");
  return 0;
}

struct TableArgs {
  std::string variant;  // total | moment | coeff
  std::string ic;
  int n_max = 0;  // total
  int order = 0;  // moment/coeff
  double t = 1.0;
  int order_ref = 65;
};

template <class R>
int cmd_table(const TableArgs& a, const CommonOpts& common, const std::string& cmdline) {
  const auto t0 = std::chrono::steady_clock::now();
  const InitialCondition ic = parse_ic(a.ic);
  Harness<R> h = make_harness<R>(common, a.order_ref);

  ConvergenceTable tab;
  std::string tag;
  if (a.variant == "total") {
    if (a.n_max < 1) throw usage_error("table total needs --Nmax >= 1");
    tab = h.total_error_table(ic, a.n_max, a.t, common.modes);
    tag = "total_" + ic.name() + "_t" + t_tag(a.t);
  } else if (a.variant == "moment") {
    if (a.order < 1) throw usage_error("table moment needs --N >= 1");
    tab = h.moment_error_table(ic, a.order, a.t, common.modes);
    tag = "moment_" + ic.name() + "_P" + std::to_string(a.order) + "_t" + t_tag(a.t);
  } else if (a.variant == "coeff") {
    if (a.order < 1) throw usage_error("table coeff needs --N >= 1");
    tab = h.coefficient_table(ic, a.order, a.t, common.modes);
    tag = "coeff_" + ic.name() + "_P" + std::to_string(a.order) + "_t" + t_tag(a.t);
  } else {
    throw usage_error("table variant must be total, moment, or coeff");
  }

  ensure_dir(common.out_dir);
  const std::string csv = path_join(common.out_dir, "table_" + tag + ".csv");
  const std::string md = path_join(common.out_dir, "table_" + tag + ".md");
  const std::string raw = path_join(common.out_dir, "table_" + tag + ".raw.csv");
  {
    std::ofstream os(csv);
    tab.write_csv(os, common.digits);
  }
  {
    std::ofstream os(md);
    tab.write_markdown(os);
  }
  {
    // companion raw file: full-precision values
    std::ofstream os(raw);
    os << "eps";
    for (const std::string& c : tab.col_labels) os << ',' << c;
    os << "\n";
    for (std::size_t r = 0; r < tab.eps_rows.size(); ++r) {
      os << tab.eps_rows[r].str();
      for (const auto& cell : tab.cells[r]) os << ',' << cell.value_full;
      os << "\n";
    }
  }

  RunManifest m;
  m.command_line = cmdline;
  m.add("ic", ic.name());
  m.add("table", a.variant);
  m.add("t", std::to_string(a.t));
  m.add("precision", common.precision == 0 ? "double" : std::to_string(common.precision));
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs = {csv, md, raw};
  m.append_to(common.out_dir);
  return 0;
}

struct FigureArgs {
  std::string variant;  // ratio | an-ratio
  std::string ic;
  double t = 1.0;
  std::string quantity = "total";  // total | m0 | m1 | m2
  int n_max = 12;
  std::vector<std::string> eps_list;
  double s = 1.0;
  int an_nmax = 120;
  int an_modes = 1000;
  int order_ref = 65;
};

template <class R>
int cmd_figure(const FigureArgs& a, const CommonOpts& common, const std::string& cmdline) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.command_line = cmdline;
  ensure_dir(common.out_dir);

  if (a.variant == "an-ratio") {
    if (a.an_nmax < 1 || a.an_modes < 1) throw usage_error("an-ratio needs --nmax and --K >= 1");
    if (!(a.s > 0)) throw usage_error("an-ratio needs --s > 0");
    const TheoryConstants<double> tc = TheoryConstants<double>::make(53);
    std::ostringstream name;
    name << "an_ratio_s" << t_tag(a.s) << ".txt";
    const std::string path = path_join(common.out_dir, name.str());
    std::ofstream os(path);
    os << "# n  a_{n+1}/a_n  (n+1)/s\n";
    double prev = a_coefficient_log(a.s, 1, a.an_modes, tc.amp);
    for (int n = 1; n < a.an_nmax; ++n) {
      const double cur = a_coefficient_log(a.s, n + 1, a.an_modes, tc.amp);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d %.12E %.12E\n", n, std::exp(cur - prev),
                    (n + 1) / a.s);
      os << buf;
      prev = cur;
    }
    os.close();
    m.add("s", std::to_string(a.s));
    m.add("K", std::to_string(a.an_modes));
    m.outputs.push_back(path);
  } else if (a.variant == "ratio") {
    const InitialCondition ic = parse_ic(a.ic);
    RatioQuantity q = RatioQuantity::total();
    if (a.quantity == "m0") q = RatioQuantity::moment_l(0);
    else if (a.quantity == "m1") q = RatioQuantity::moment_l(1);
    else if (a.quantity == "m2") q = RatioQuantity::moment_l(2);
    else if (a.quantity != "total")
      throw usage_error("figure quantity must be total, m0, m1, or m2");

    std::vector<Rational> eps_values;
    if (a.eps_list.empty()) {
      eps_values = eps_sweep();
    } else {
      for (const std::string& e : a.eps_list) eps_values.push_back(Rational::parse(e));
    }
    Harness<R> h = make_harness<R>(common, a.order_ref);
    for (const Rational& eps : eps_values) {
      const auto rows = h.ratio_profile(ic, a.t, eps, a.n_max, q, common.modes);
      std::ostringstream name;
      name << "ratio_" << q.name() << "_" << ic.name() << "_t" << t_tag(a.t)
           << "_eps" << eps.num << "_" << eps.den << ".txt";
      const std::string path = path_join(common.out_dir, name.str());
      std::ofstream os(path);
      os << "# N  normalized_ratio  flag   (ratio e^{N+1}/e^N divided by "
         << (q.moment ? "eps^2" : "eps") << ")\n";
      for (const RatioRow& r : rows) {
        char buf[96];
        if (r.below_floor)
          std::snprintf(buf, sizeof buf, "%d nan below-floor\n", r.order);
        else
          std::snprintf(buf, sizeof buf, "%d %.12E ok\n", r.order, r.normalized);
        os << buf;
      }
      m.outputs.push_back(path);
    }
    m.add("ic", ic.name());
    m.add("t", std::to_string(a.t));
    m.add("quantity", a.quantity);
  } else {
    throw usage_error("figure variant must be ratio or an-ratio");
  }

  m.add("precision", common.precision == 0 ? "double" : std::to_string(common.precision));
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.append_to(common.out_dir);
  return 0;
}

struct BoundsArgs {
  std::string ic;
  int order = 1;
  std::string eps = "1/32";
  double t = 1.0;
  std::string out = "bounds.csv";
  int order_ref = 65;
};

template <class R>
int cmd_bounds(const BoundsArgs& a, const CommonOpts& common, const std::string& cmdline) {
  const auto t0 = std::chrono::steady_clock::now();
  const InitialCondition ic = parse_ic(a.ic);
  const Rational eps = Rational::parse(a.eps);
  Harness<R> h = make_harness<R>(common, a.order_ref);
  const auto checks = run_bounds(h, ic, a.order, eps, a.t, common.modes);

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  std::ofstream os(a.out);
  if (!os) throw usage_error("cannot open output file: " + a.out);
  os << "quantity,computed,bound,margin,pass\n";
  for (const BoundCheck& c : checks) {
    std::string name = c.quantity;
    if (!c.hypothesis_met) name += " [hypothesis unmet]";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.*E,%.*E,%.3E", common.digits - 1, c.computed,
                  common.digits - 1, c.bound, c.margin);
    os << name << ',' << buf << ',' << (c.pass ? "true" : "false") << "\n";
  }
  os.close();

  RunManifest m;
  m.command_line = cmdline;
  m.add("ic", ic.name());
  m.add("order", std::to_string(a.order));
  m.add("eps", eps.str());
  m.add("t", std::to_string(a.t));
  m.add("precision", common.precision == 0 ? "double" : std::to_string(common.precision));
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs.push_back(a.out);
  m.append_to(out_path.has_parent_path() ? out_path.parent_path().string() : ".");
  return 0;
}

template <class F>
int dispatch_precision(unsigned precision, F&& f) {
  if (precision == 0) return f(static_cast<double*>(nullptr));
  return f(static_cast<ExtendedReal*>(nullptr));
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  std::string cmdline = "pnspec";
  for (const std::string& a : args) cmdline += " " + a;

  CLI::App app{"P_N spectral solver for the model kinetic equation: exact-in-time "
               "propagation, convergence tables, ratio studies, and bound checks"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--precision", common.precision,
                 "working precision in bits (0 = native double)")
      ->capture_default_str();
  app.add_option("--modes", common.modes,
                 "Fourier cutoff K (modes -K..K); 0 = resolution rule")
      ->capture_default_str();
  app.add_option("--digits", common.digits, "significant digits in emitted tables")
      ->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads (0 = PNSPEC_THREADS/auto)")
      ->capture_default_str();
  app.add_flag("--quiet", common.quiet, "suppress progress messages");

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve one configuration and write the state");
  solve->add_option("--ic", sa.ic, "g1|g2|g3|file:<path>")->required();
  solve->add_option("--N", sa.order, "moment order")->required();
  solve->add_option("--eps", sa.eps, "scaling parameter (rational, e.g. 1/32)")->required();
  solve->add_option("--t", sa.t, "solution time")->required();
  solve->add_option("--out", sa.out, "output state file")->capture_default_str();
  solve->add_option("--Nref", sa.order_ref, "reference order")->capture_default_str();

  TableArgs ta;
  CLI::App* table = app.add_subcommand("table", "convergence tables over the eps sweep");
  table->add_option("variant", ta.variant, "total|moment|coeff")->required();
  table->add_option("--ic", ta.ic, "g1|g2|g3|file:<path>")->required();
  table->add_option("--Nmax", ta.n_max, "largest order (total tables)");
  table->add_option("--N", ta.order, "moment order (moment/coeff tables)");
  table->add_option("--t", ta.t, "solution time")->required();
  table->add_option("--Nref", ta.order_ref, "reference order")->capture_default_str();

  FigureArgs fa;
  CLI::App* figure = app.add_subcommand("figure", "N-sweep ratio data and a_n ratio data");
  figure->add_option("variant", fa.variant, "ratio|an-ratio")->required();
  figure->add_option("--ic", fa.ic, "g1|g2|g3|file:<path>");
  figure->add_option("--t", fa.t, "solution time");
  figure->add_option("--quantity", fa.quantity, "total|m0|m1|m2")->capture_default_str();
  figure->add_option("--Nmax", fa.n_max, "largest N in the sweep")->capture_default_str();
  figure->add_option("--eps", fa.eps_list, "restrict the eps sweep (repeatable)");
  figure->add_option("--s", fa.s, "decay argument for an-ratio");
  figure->add_option("--nmax", fa.an_nmax, "largest n for an-ratio")->capture_default_str();
  figure->add_option("--K", fa.an_modes, "truncation for an-ratio sums")->capture_default_str();

  BoundsArgs ba;
  CLI::App* bounds = app.add_subcommand("bounds", "theoretical bound reports for one solve");
  bounds->add_option("--ic", ba.ic, "g1|g2|g3|file:<path>")->required();
  bounds->add_option("--N", ba.order, "moment order")->required();
  bounds->add_option("--eps", ba.eps, "scaling parameter")->required();
  bounds->add_option("--t", ba.t, "solution time")->required();
  bounds->add_option("--out", ba.out, "output report file")->capture_default_str();
  bounds->add_option("--Nref", ba.order_ref, "reference order")->capture_default_str();

  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for table/figure outputs")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 vector form
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  common.out_dir = out_dir;

  try {
    if (solve->parsed())
      return dispatch_precision(common.precision, [&](auto* tag) {
        using R = std::remove_pointer_t<decltype(tag)>;
        return cmd_solve<R>(sa, common, cmdline);
      });
    if (table->parsed())
      return dispatch_precision(common.precision, [&](auto* tag) {
        using R = std::remove_pointer_t<decltype(tag)>;
        return cmd_table<R>(ta, common, cmdline);
      });
    if (figure->parsed())
      return dispatch_precision(common.precision, [&](auto* tag) {
        using R = std::remove_pointer_t<decltype(tag)>;
        return cmd_figure<R>(fa, common, cmdline);
      });
    if (bounds->parsed())
      return dispatch_precision(common.precision, [&](auto* tag) {
        using R = std::remove_pointer_t<decltype(tag)>;
        return cmd_bounds<R>(ba, common, cmdline);
      });
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pnspec
