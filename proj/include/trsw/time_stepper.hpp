#pragma once
/// \file time_stepper.hpp
/// \brief Semi-discrete right-hand side, draining-time-step positivity
/// limiter and SSP-RK3 time integration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "trsw/flux.hpp"

namespace trsw {

/// Conserved state extended by kGhostCells zero-order extrapolated cells per side.
struct PaddedState {
  ConservedState cells;

  std::size_t interior_size() const noexcept { return cells.size() - 2 * kGhostCells; }
};

inline PaddedState apply_boundary(const ConservedState &s) {
  if (s.size() < Grid::kMinCells) throw ConfigError("apply_boundary: too few cells");
  return {ConservedState{pad_constant(s.h), pad_constant(s.q), pad_constant(s.p),
                         pad_constant(s.hb)}};
}

/// Cell averages of the q-source f p. Constant f uses f p_k; variable f uses
/// Simpson's rule over the cell with the reconstructed interface values of p.
inline Field source_term(const ConservedState &s, const InterfaceStates &iface,
                         const CoriolisSpec &coriolis, const Grid &grid) {
  const std::size_t n = grid.size();
  Field src(n, 0.0);
  if (coriolis.is_zero()) return src;
  if (coriolis.is_constant()) {
    for (std::size_t k = 0; k < n; ++k) src[k] = coriolis.f0 * s.p[k];
    return src;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double f_left = coriolis(grid.interface(k));
    const double f_mid = coriolis(grid.center(k));
    const double f_right = coriolis(grid.interface(k + 1));
    src[k] = (f_left * iface.plus[k].p + 4.0 * f_mid * s.p[k] + f_right * iface.minus[k + 1].p) / 6.0;
  }
  return src;
}

/// Interface fluxes, q-source and the largest local speed of one state.
struct FluxEvaluation {
  std::vector<Vec4> flux;  ///< N+1 interface fluxes, flux[0] at y_min
  Field source;            ///< N cell sources for q
  double a_max = 0.0;
};

inline FluxEvaluation evaluate_fluxes(const ConservedState &s, const Topography &topo,
                                      const CoriolisSpec &coriolis, const Grid &grid,
                                      const Numerics &num) {
  const InterfaceStates iface = build_interface_states(s, topo, coriolis, grid, num);
  const std::size_t n = grid.size();
  FluxEvaluation out;
  out.flux.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    // cells on either side of interface i in padded numbering
    const double L_left = iface.L_center[i + kGhostCells - 1];
    const double L_right = iface.L_center[i + kGhostCells];
    const double H = diffusion_switch(L_left, L_right, grid.dy(), grid.length(), num.switch_c,
                                      num.switch_m);
    LocalSpeeds a;
    out.flux[i] = numerical_flux(iface.minus[i], iface.plus[i], H, &a);
    out.a_max = std::max(out.a_max, a.max_abs());
  }
  out.source = source_term(s, iface, coriolis, grid);
  return out;
}

/// -(G_{k+1/2} - G_{k-1/2}) / dy + S_k, source on q only.
inline ConservedState tendency_from_fluxes(const std::vector<Vec4> &flux, const Field &source,
                                           double dy) {
  const std::size_t n = flux.size() - 1;
  ConservedState d(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.h[k] = -(flux[k + 1][0] - flux[k][0]) / dy;
    d.q[k] = -(flux[k + 1][1] - flux[k][1]) / dy + source[k];
    d.p[k] = -(flux[k + 1][2] - flux[k][2]) / dy;
    d.hb[k] = -(flux[k + 1][3] - flux[k][3]) / dy;
  }
  return d;
}

/// Semi-discrete tendencies without positivity limiting.
inline ConservedState rhs(const ConservedState &s, const Topography &topo,
                          const CoriolisSpec &coriolis, const Grid &grid, const Numerics &num) {
  const FluxEvaluation ev = evaluate_fluxes(s, topo, coriolis, grid, num);
  return tendency_from_fluxes(ev.flux, ev.source, grid.dy());
}

inline double cfl_dt(double a_max, double dy, double cfl, double remaining) {
  if (!(a_max > 0.0)) return remaining;
  return cfl * dy / a_max;
}

/// Rescales outgoing h and hb fluxes so that no cell loses more than it
/// holds during a forward-Euler stage of length dt. Each component uses its
/// own donor cell (upwind by that component's flux sign) and drain time
/// dy * U_k / (sum of outgoing fluxes of U from cell k). Ghost donors are
/// not limited. Returns the number of rescaled interface components.
inline std::size_t draining_limit(const ConservedState &s, std::vector<Vec4> &flux, double dt,
                                  double dy) {
  const std::size_t n = s.size();
  std::size_t limited = 0;
  auto limit_component = [&](const Field &u, std::size_t c) {
    Field t_drain(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double out = std::max(flux[k + 1][c], 0.0) + std::max(-flux[k][c], 0.0);
      t_drain[k] = out > 0.0 ? dy * std::max(u[k], 0.0) / out : std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i <= n; ++i) {
      double &g = flux[i][c];
      std::optional<std::size_t> donor;
      if (g > 0.0 && i > 0) donor = i - 1;
      if (g < 0.0 && i < n) donor = i;
      if (!donor || t_drain[*donor] >= dt) continue;
      g *= t_drain[*donor] / dt;
      ++limited;
    }
  };
  limit_component(s.h, 0);
  limit_component(s.hb, 3);
  return limited;
}

/// a x + b y for the integrator's state types.
inline double lincomb(double a, double x, double b, double y) { return a * x + b * y; }

inline ConservedState lincomb(double a, const ConservedState &x, double b, const ConservedState &y) {
  ConservedState z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    z.h[k] = a * x.h[k] + b * y.h[k];
    z.q[k] = a * x.q[k] + b * y.q[k];
    z.p[k] = a * x.p[k] + b * y.p[k];
    z.hb[k] = a * x.hb[k] + b * y.hb[k];
  }
  return z;
}

/// Three-stage third-order SSP Runge-Kutta step built from a forward-Euler
/// stage operator euler(u) = u + dt L(u). stage_index passes 0, 1, 2.
template <class State, class EulerStage>
State ssp_rk3(const State &u0, EulerStage &&euler) {
  const State u1 = euler(u0, 0);
  const State u2 = lincomb(0.75, u0, 0.25, euler(u1, 1));
  return lincomb(1.0 / 3.0, u0, 2.0 / 3.0, euler(u2, 2));
}

struct StepReport {
  double dt = 0.0;
  double a_max = 0.0;
  std::size_t limited_interfaces = 0;
  double t = 0.0;  ///< clock after the step
  /// SSP-weighted net boundary outflow (G_{N+1/2} - G_{1/2}) of h and hb
  /// actually applied, after draining.
  double boundary_outflow_h = 0.0;
  double boundary_outflow_hb = 0.0;
  double min_stage_h = 0.0;   ///< smallest h over the three stage results
  double min_stage_hb = 0.0;
};

struct StepResult {
  ConservedState state;
  StepReport report;
};

namespace detail {

inline void require_finite(const ConservedState &s, double t, const char *where) {
  if (!all_finite(s)) throw IntegrationError(std::string("non-finite value in ") + where, t);
}

}  // namespace detail

/// One SSP-RK3 step of length dt. When stage0 holds the flux evaluation of
/// `state` it is reused instead of being recomputed.
inline StepResult ssp_rk3_step(const ConservedState &state, double t, double dt,
                               const Scenario &sc,
                               std::optional<FluxEvaluation> stage0 = std::nullopt) {
  const Grid &grid = sc.grid;
  const double dy = grid.dy();
  StepReport rep;
  rep.dt = dt;
  rep.t = t + dt;
  rep.min_stage_h = std::numeric_limits<double>::infinity();
  rep.min_stage_hb = std::numeric_limits<double>::infinity();
  constexpr double kStageWeight[3] = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};

  auto euler = [&](const ConservedState &u, int stage) {
    FluxEvaluation ev = (stage == 0 && stage0)
                            ? std::move(*stage0)
                            : evaluate_fluxes(u, sc.topography, sc.coriolis, grid, sc.numerics);
    if (stage == 0) rep.a_max = ev.a_max;
    rep.limited_interfaces += draining_limit(u, ev.flux, dt, dy);
    const std::size_t n = grid.size();
    rep.boundary_outflow_h += kStageWeight[stage] * (ev.flux[n][0] - ev.flux[0][0]);
    rep.boundary_outflow_hb += kStageWeight[stage] * (ev.flux[n][3] - ev.flux[0][3]);
    ConservedState next = lincomb(1.0, u, dt, tendency_from_fluxes(ev.flux, ev.source, dy));
    detail::require_finite(next, t, "Runge-Kutta stage");
    for (std::size_t k = 0; k < n; ++k) {
      rep.min_stage_h = std::min(rep.min_stage_h, next.h[k]);
      rep.min_stage_hb = std::min(rep.min_stage_hb, next.hb[k]);
      // drained cells may end a few ulp below zero
      next.h[k] = std::max(next.h[k], 0.0);
      next.hb[k] = std::max(next.hb[k], 0.0);
    }
    return next;
  };

  ConservedState out = ssp_rk3(state, euler);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.h[k] = std::max(out.h[k], 0.0);
    out.hb[k] = std::max(out.hb[k], 0.0);
  }
  return {std::move(out), rep};
}

/// What an observer sees after every accepted step (and once at t = 0).
struct StepEvent {
  double t = 0.0;
  const ConservedState *state = nullptr;
  const StepReport *report = nullptr;  ///< null for the initial event
  bool is_snapshot = false;
  std::size_t step = 0;
};

using StepObserver = std::function<void(const StepEvent &)>;

struct Snapshot {
  double t = 0.0;
  ConservedState state;
};

struct SimulationResult {
  ConservedState final_state;
  double t = 0.0;
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  bool failed = false;
  std::string error;
  double min_h = std::numeric_limits<double>::infinity();   ///< over all stages
  double min_hb = std::numeric_limits<double>::infinity();
};

/// Output times: the configured snapshots not beyond t_final, plus t_final.
inline std::vector<double> snapshot_schedule(const Scenario &sc) {
  std::vector<double> times;
  for (double t : sc.snapshots)
    if (t <= sc.t_final) times.push_back(t);
  times.push_back(sc.t_final);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

/// Integrates the scenario to t_final. Steps are clipped to land exactly on
/// snapshot times. A non-finite state stops the run with `failed` set and
/// the last good state returned.
inline SimulationResult run_simulation(const Scenario &sc, const StepObserver &observer = {}) {
  sc.validate();
  SimulationResult res;
  const std::vector<double> schedule = snapshot_schedule(sc);
  std::size_t next_snap = 0;

  ConservedState u = sc.initial;
  double t = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    res.min_h = std::min(res.min_h, u.h[k]);
    res.min_hb = std::min(res.min_hb, u.hb[k]);
  }

  auto emit = [&](const StepReport *rep) {
    bool snap = false;
    while (next_snap < schedule.size() && schedule[next_snap] <= t) {
      snap = true;
      ++next_snap;
    }
    if (snap) res.snapshots.push_back({t, u});
    if (observer) observer(StepEvent{t, &u, rep, snap, res.steps});
  };
  emit(nullptr);

  try {
    while (t < sc.t_final) {
      const double target = schedule[next_snap];
      FluxEvaluation ev =
          evaluate_fluxes(u, sc.topography, sc.coriolis, sc.grid, sc.numerics);
      const double remaining = target - t;
      double dt = cfl_dt(ev.a_max, sc.grid.dy(), sc.numerics.cfl, remaining);
      if (!(dt > 0.0) || !std::isfinite(dt)) throw IntegrationError("invalid time step", t);
      const bool lands = dt >= remaining;
      if (lands) dt = remaining;
      StepResult step = ssp_rk3_step(u, t, dt, sc, std::move(ev));
      u = std::move(step.state);
      t = lands ? target : t + dt;
      step.report.t = t;
      res.min_h = std::min(res.min_h, step.report.min_stage_h);
      res.min_hb = std::min(res.min_hb, step.report.min_stage_hb);
      ++res.steps;
      emit(&step.report);
    }
  } catch (const IntegrationError &e) {
    res.failed = true;
    res.error = std::string(e.what()) + " at t=" + std::to_string(e.time());
  }
  res.final_state = u;
  res.t = t;
  return res;
}

}  // namespace trsw
