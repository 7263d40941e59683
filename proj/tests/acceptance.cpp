// Acceptance suite. Prints one PASS/FAIL line per criterion; with an
// argument runs only that criterion. Exit status is nonzero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "trsw/trsw.hpp"

using namespace trsw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Relative ledger drift of mass and hb over a run.
struct Drift {
  double mass = 0.0;
  double hb = 0.0;
  double worst() const { return std::max(mass, hb); }
};

struct LedgerRun {
  SimulationResult result;
  Drift drift;
  double seconds = 0.0;
};

LedgerRun run_with_ledger(const Scenario &sc, const StepObserver &extra = {}) {
  ConservationLedger ledger(sc);
  DiagnosticsRecord first;
  bool have_first = false;
  Drift drift;
  const auto t0 = std::chrono::steady_clock::now();
  SimulationResult res = run_simulation(sc, [&](const StepEvent &ev) {
    const DiagnosticsRecord r = ledger.record(ev);
    if (!have_first) {
      first = r;
      have_first = true;
    }
    drift.mass = std::max(drift.mass, std::abs(r.mass_drift) / first.total_mass);
    drift.hb = std::max(drift.hb, std::abs(r.hb_drift) / first.total_hb);
    if (extra) extra(ev);
  });
  return {std::move(res), drift, seconds_since(t0)};
}

Field surface(const ConservedState &s, const Topography &topo) {
  Field w(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) w[k] = s.h[k] + topo.center()[k];
  return w;
}

// ---------------------------------------------------------------------------
// 1. equilibria are preserved to round-off

struct EquilibriumCheck {
  std::string name;
  double deviation = 0.0;  ///< max over cells and steps of |w - w0| and |p|
  double scale = 0.0;      ///< max |L| of the initial state
  double seconds = 0.0;
  Drift drift;
  bool failed = false;
};

EquilibriumCheck check_equilibrium(ScenarioId id, const ScenarioOverrides &ov) {
  const Scenario sc = make_scenario(id, ov);
  const Field w0 = surface(sc.initial, sc.topography);
  const GlobalFlux R = compute_R(sc.initial, sc.topography, sc.coriolis, sc.grid);
  EquilibriumCheck out;
  out.name = sc.name;
  out.scale = max_abs(compute_L_centers(sc.initial, R.center, sc.numerics.eps_desing));
  const LedgerRun run = run_with_ledger(sc, [&](const StepEvent &ev) {
    const Field w = surface(*ev.state, sc.topography);
    for (std::size_t k = 0; k < w.size(); ++k)
      out.deviation = std::max({out.deviation, std::abs(w[k] - w0[k]), std::abs(ev.state->p[k])});
  });
  out.seconds = run.seconds;
  out.drift = run.drift;
  out.failed = run.result.failed;
  return out;
}

std::vector<EquilibriumCheck> equilibrium_runs() {
  return {check_equilibrium(ScenarioId::Ex1Steady, {.cells = 100, .t_final = 0.4}),
          check_equilibrium(ScenarioId::LakeAtRest, {}),
          check_equilibrium(ScenarioId::ThermalRest, {})};
}

Outcome criterion_well_balance() {
  Outcome o{true, ""};
  for (const auto &c : equilibrium_runs()) {
    const bool ok = !c.failed && c.deviation <= 1e-12 * c.scale && c.seconds < 1.0;
    o.pass = o.pass && ok;
    o.detail += fmt("%s dev=%.2e bound=%.2e %.2fs; ", c.name.c_str(), c.deviation, 1e-12 * c.scale, c.seconds);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 2. perturbation of the thermal steady state

struct PerturbationRun {
  double tv0 = 0.0;
  double worst_tv = 0.0;
  double w_min0 = 0.0, w_max0 = 0.0;
  double w_min = 0.0, w_max = 0.0;
  std::size_t outputs = 0;
  int pulses_left = 0, pulses_right = 0;
  double seconds = 0.0;
  Drift drift;
  bool failed = false;
};

// Connected runs of cells where the surface exceeds the steady surface by
// more than `threshold`, split by side of `center`.
std::pair<int, int> count_pulses(const Field &dw, const Grid &grid, double threshold, double center) {
  int left = 0, right = 0;
  bool inside = false;
  double start = 0.0;
  for (std::size_t k = 0; k <= dw.size(); ++k) {
    const bool above = k < dw.size() && dw[k] > threshold;
    if (above && !inside) start = grid.center(k);
    if (!above && inside) {
      const double mid = 0.5 * (start + grid.center(k - 1));
      (mid < center ? left : right) += 1;
    }
    inside = above;
  }
  return {left, right};
}

PerturbationRun perturbation_run() {
  constexpr double kAmplitude = 0.1;
  constexpr double kSplitTime = 0.05;
  const Scenario steady = make_scenario(ScenarioId::Ex1Steady, {.cells = 100});
  const Scenario sc = make_scenario(ScenarioId::Ex1Perturbed,
                                    {.cells = 100, .t_final = 0.4,
                                     .snapshots = std::vector<double>{kSplitTime, 0.1, 0.2, 0.4}});
  const Field w_steady = surface(steady.initial, steady.topography);
  PerturbationRun out;
  const Field w0 = surface(sc.initial, sc.topography);
  out.tv0 = total_variation(w0);
  out.w_min0 = *std::min_element(w0.begin(), w0.end());
  out.w_max0 = *std::max_element(w0.begin(), w0.end());
  out.w_min = out.w_min0;
  out.w_max = out.w_max0;
  const LedgerRun run = run_with_ledger(sc, [&](const StepEvent &ev) {
    if (!ev.is_snapshot) return;
    ++out.outputs;
    const Field w = surface(*ev.state, sc.topography);
    out.worst_tv = std::max(out.worst_tv, total_variation(w));
    out.w_min = std::min(out.w_min, *std::min_element(w.begin(), w.end()));
    out.w_max = std::max(out.w_max, *std::max_element(w.begin(), w.end()));
    if (ev.t == kSplitTime) {
      Field dw(w.size());
      for (std::size_t k = 0; k < w.size(); ++k) dw[k] = w[k] - w_steady[k];
      std::tie(out.pulses_left, out.pulses_right) = count_pulses(dw, sc.grid, 0.1 * kAmplitude, -1.45);
    }
  });
  out.seconds = run.seconds;
  out.drift = run.drift;
  out.failed = run.result.failed;
  return out;
}

Outcome criterion_perturbation() {
  constexpr double kAmplitude = 0.1;
  const PerturbationRun r = perturbation_run();
  const double bound = r.tv0 + 2.0 * kAmplitude;
  const bool tv_ok = r.worst_tv <= bound;
  const bool extrema_ok = r.w_max <= r.w_max0 + kAmplitude && r.w_min >= r.w_min0 - kAmplitude;
  const bool split_ok = r.pulses_left >= 1 && r.pulses_right >= 1;
  return {!r.failed && tv_ok && extrema_ok && split_ok && r.outputs == 4 && r.seconds < 5.0,
          fmt("TV max %.4f <= %.4f, w in [%.4f, %.4f] vs initial [%.2f, %.2f], pulses at t=0.05 "
              "left/right %d/%d, %.2fs",
              r.worst_tv, bound, r.w_min, r.w_max, r.w_min0, r.w_max0, r.pulses_left, r.pulses_right,
              r.seconds)};
}

// ---------------------------------------------------------------------------
// 3. dam break over humps

struct DamBreakRun {
  long long cells = 0;
  double min_h = 0.0;
  bool finite = false;
  bool failed = false;
  Drift drift;
  double seconds = 0.0;
  SnapshotData snapshot;
};

DamBreakRun dam_break(long long cells) {
  const Scenario sc = make_scenario(ScenarioId::Ex2DamBreak, {.cells = cells});
  const LedgerRun run = run_with_ledger(sc);
  DamBreakRun out;
  out.cells = cells;
  out.min_h = run.result.min_h;
  out.finite = all_finite(run.result.final_state);
  out.failed = run.result.failed;
  out.drift = run.drift;
  out.seconds = run.seconds;
  out.snapshot = to_snapshot_data(run.result.final_state, sc.topography, sc.grid, sc.numerics.eps_desing);
  return out;
}

std::vector<DamBreakRun> dam_break_runs() { return {dam_break(100), dam_break(400), dam_break(1600)}; }

Outcome criterion_positivity() {
  const auto runs = dam_break_runs();
  const double e_coarse = compare_solutions(runs[0].snapshot, runs[1].snapshot).at("h").l1;
  const double e_fine = compare_solutions(runs[1].snapshot, runs[2].snapshot).at("h").l1;
  double seconds = 0.0;
  bool ok = e_fine < e_coarse;
  for (const auto &r : runs) {
    ok = ok && !r.failed && r.finite && r.min_h >= 0.0;
    seconds += r.seconds;
  }
  ok = ok && seconds < 30.0;
  return {ok, fmt("min h over stages (N=400) %.3e, L1(h) 100|400 %.4e, 400|1600 %.4e, %.1fs", runs[1].min_h,
                  e_coarse, e_fine, seconds)};
}

// ---------------------------------------------------------------------------
// 4. conservation over every run above

Outcome criterion_conservation() {
  Outcome o{true, ""};
  double worst = 0.0;
  std::string worst_name;
  auto note = [&](const std::string &name, const Drift &d) {
    if (d.worst() > worst || worst_name.empty()) {
      worst = std::max(worst, d.worst());
      worst_name = name;
    }
    o.pass = o.pass && d.worst() <= 1e-11;
  };
  for (const auto &c : equilibrium_runs()) note(c.name, c.drift);
  note("ex1-perturbed", perturbation_run().drift);
  for (const auto &r : dam_break_runs()) note("ex2 N=" + std::to_string(r.cells), r.drift);
  o.detail = fmt("worst relative drift %.2e (%s), bound 1e-11", worst, worst_name.c_str());
  return o;
}

// ---------------------------------------------------------------------------
// 5. interface cubic against a bisection oracle

double bisect(const std::function<double(double)> &phi, double lo, double hi) {
  double flo = phi(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = phi(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Outcome criterion_cubic() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int trials = 10000;
  int failures = 0;
  double worst_abs = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < trials; ++i) {
    const double b = std::pow(10.0, -1.0 + 2.5 * unit(rng));
    const double D = std::pow(10.0, -3.0 + 5.0 * unit(rng));
    // p^4 = r * 8 D^3 / (27 b) with r in (0, 1) keeps two positive roots
    const double r = std::pow(10.0, -8.0 * unit(rng));
    const double p = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(r * 8.0 * D * D * D / (27.0 * b), 0.25);
    const double h_sub_max = std::sqrt(2.0 * D / b);
    const double h_fb = 1.2 * h_sub_max * unit(rng);

    auto phi = [&](double h) { return p * p / h + 0.5 * b * h * h - D; };
    const double hc = std::cbrt(p * p / b);
    const double super = bisect(phi, p * p / D, hc);
    const double sub = bisect(phi, hc, h_sub_max);
    const double d_super = std::abs(super - h_fb), d_sub = std::abs(sub - h_fb);
    const double oracle = d_sub <= d_super ? sub : super;

    const double got = solve_interface_h(p, b, D, 0.0, h_fb);
    const double err = std::abs(got - oracle);
    // near-ties between the two roots are decided by rounding; accept either
    const double alt = d_sub <= d_super ? super : sub;
    const bool near_tie = std::abs(d_sub - d_super) <= 1e-9 * std::max(1.0, oracle);
    const bool ok = err <= 1e-10 || err <= 1e-12 * std::abs(oracle) ||
                    (near_tie && std::abs(got - alt) <= std::max(1e-10, 1e-12 * std::abs(alt)));
    if (!ok) ++failures;
    worst_abs = std::max(worst_abs, std::min(err, near_tie ? std::abs(got - alt) : err));
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 1.0,
          fmt("%d/%d triples off the oracle, worst abs error %.2e, %.3fs", failures, trials, worst_abs, secs)};
}

// ---------------------------------------------------------------------------
// 6. temporal and spatial orders

Outcome criterion_orders() {
  auto ode_error = [](int steps) {
    const double dt = 1.0 / steps;
    double u = 1.0;
    for (int i = 0; i < steps; ++i) u = ssp_rk3(u, [dt](double x, int) { return x - dt * x; });
    return std::abs(u - std::exp(-1.0));
  };
  bool ok = true;
  std::string detail = "RK3 orders";
  for (int steps = 10; steps <= 500; steps *= 10) {
    const double order = std::log(ode_error(steps) / ode_error(steps * 10)) / std::log(10.0);
    ok = ok && std::abs(order - 3.0) <= 0.2;
    detail += fmt(" %.3f", order);
  }
  const ConvergenceTable t = convergence_study(ScenarioId::SmoothPulse, {}, {100, 200, 400, 800});
  detail += "; spatial orders";
  ok = ok && !t.exact;
  for (const auto &row : t.rows) {
    if (!row.order) continue;
    ok = ok && std::abs(*row.order - 2.0) <= 0.2;
    detail += fmt(" %.3f", *row.order);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 7. time-averaged thermo-geostrophic balance of the adjusted jet

Outcome criterion_time_averaged_balance() {
  const double window_start = 2.0 * (2.0 * std::numbers::pi);  // two inertial periods, f = 1
  const Scenario sc = make_scenario(ScenarioId::Ex3RossbyB,
                                    {.cells = 1500, .snapshots = std::vector<double>{window_start}});
  TimeAveragedBalance avg(window_start);
  const SimulationResult res = run_simulation(sc, [&](const StepEvent &ev) {
    if (ev.t >= window_start) avg.add(ev.t, balance_residual(*ev.state, sc.coriolis, sc.grid, sc.topography));
  });
  if (res.failed) return {false, "integration failed: " + res.error};
  const BalanceFields a = avg.finalize();
  double gap = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < sc.grid.size(); ++k) {
    if (std::abs(sc.grid.center(k)) > 10.0) continue;
    gap = std::max(gap, std::abs(a.lhs[k] - a.rhs[k]));
    scale = std::max({scale, std::abs(a.lhs[k]), std::abs(a.rhs[k])});
  }
  const double rel = gap / scale;
  return {rel <= 0.05, fmt("relative gap %.4f (bound 0.05) over |y|<=10, window %.3f..%.3f", rel, window_start,
                           sc.t_final)};
}

// ---------------------------------------------------------------------------
// 8. steepening of a meridional velocity pulse

Outcome criterion_breakdown() {
  const double t_end = 12.0;  // left pulse reaches the boundary shortly after
  const Scenario sc = make_scenario(ScenarioId::Ex4Breakdown,
                                    {.cells = 1000, .t_final = t_end, .snapshots = std::vector<double>{}});
  double g0 = -1.0, g_max = 0.0, y_first5 = NAN, t_first5 = NAN;
  const SimulationResult res = run_simulation(sc, [&](const StepEvent &ev) {
    const Primitives prim = primitives_from_state(*ev.state, sc.topography, sc.numerics.eps_desing);
    const Field dv = derivative(prim.v, sc.grid.dy());
    std::size_t km = 0;
    for (std::size_t k = 0; k < dv.size(); ++k)
      if (std::abs(dv[k]) > std::abs(dv[km])) km = k;
    const double g = std::abs(dv[km]);
    if (g0 < 0.0) g0 = g;
    g_max = std::max(g_max, g);
    if (std::isnan(y_first5) && g >= 5.0 * g0) {
      y_first5 = sc.grid.center(km);
      t_first5 = ev.t;
    }
  });
  const double growth = g_max / g0;
  const bool ok = !res.failed && growth >= 10.0 && !std::isnan(y_first5) && y_first5 > 0.0;
  return {ok, fmt("max|v_y| growth %.3fx (need >= 10x) over t in [0, %.1f], first 5x at t=%.3f y=%.3f%s", growth,
                  t_end, t_first5, y_first5, res.failed ? ", integration failed" : "")};
}

// ---------------------------------------------------------------------------
// 9. inertial instability of the equatorial jet

Outcome criterion_inertial_instability() {
  const Scenario sc = make_scenario(ScenarioId::Ex6InertialInstability, {.cells = 2000});
  double v0 = -1.0;
  const SimulationResult res = run_simulation(sc, [&](const StepEvent &ev) {
    if (v0 < 0.0)
      v0 = max_abs(primitives_from_state(*ev.state, sc.topography, sc.numerics.eps_desing).v);
  });
  if (res.failed) return {false, "integration failed: " + res.error};
  const Field v = primitives_from_state(res.final_state, sc.topography, sc.numerics.eps_desing).v;
  double inside = 0.0, total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    total += v[k] * v[k];
    if (std::abs(sc.grid.center(k)) <= 5.0) inside += v[k] * v[k];
  }
  const double v_end = max_abs(v);
  const double fraction = total > 0.0 ? inside / total : 0.0;
  const double baseline = std::max(v0, 1e-12);
  const bool ok = v0 <= 1e-12 && v_end >= 1e4 * baseline && fraction > 0.9;
  return {ok, fmt("max|v| %.2e at t=0, %.3e at t=3.5pi (>= %.0e needed), v^2 fraction in |y|<=5: %.4f", v0, v_end,
                  1e4 * baseline, fraction)};
}

// ---------------------------------------------------------------------------
// 10. dimensionless numbers and linear-theory constants

Outcome criterion_constants() {
  const RossbyBurger rb = rossby_burger(0.1, 1.0, 0.121, 0.1, 0.1);
  bool ok = std::abs(rb.rossby - 1.0) <= 1e-12 && std::abs(rb.burger - 1.1) <= 1e-12;
  const double expected[] = {1.0, std::sqrt(3.0), std::sqrt(5.0)};
  for (unsigned n = 0; n < 3; ++n) ok = ok && std::abs(equatorial_frequency(n) - expected[n]) <= 1e-15;
  return {ok, fmt("Ro=%.15g Bu=%.15g, frequencies %.6f %.6f %.6f", rb.rossby, rb.burger, equatorial_frequency(0),
                  equatorial_frequency(1), equatorial_frequency(2))};
}

struct Criterion {
  int id;
  const char *name;
  Outcome (*check)();
};

const Criterion kCriteria[] = {
    {1, "well-balanced equilibria", criterion_well_balance},
    {2, "perturbed thermal steady state", criterion_perturbation},
    {3, "dam-break positivity and self-convergence", criterion_positivity},
    {4, "mass and buoyancy conservation", criterion_conservation},
    {5, "interface depth solver vs bisection", criterion_cubic},
    {6, "temporal and spatial order", criterion_orders},
    {7, "time-averaged balance of the adjusted jet", criterion_time_averaged_balance},
    {8, "breakdown of a smooth pulse", criterion_breakdown},
    {9, "equatorial inertial instability", criterion_inertial_instability},
    {10, "diagnostic constants", criterion_constants},
};

}  // namespace

int main(int argc, char **argv) {
  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  for (const auto &c : kCriteria) {
    if (selected && c.id != selected) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
