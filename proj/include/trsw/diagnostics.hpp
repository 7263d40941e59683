#pragma once
/// \file diagnostics.hpp
/// \brief Verification quantities: thermo-geostrophic balance (instant and
/// time averaged), conservation ledgers, energy, potential vorticity and
/// reference values from linear theory.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trsw/time_stepper.hpp"

namespace trsw {

/// Raised when a diagnostic is requested outside its domain of validity.
class DiagnosticError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Centered first derivative; second-order one-sided stencils at the ends.
inline Field derivative(const Field &f, double dy) {
  const std::size_t n = f.size();
  Field d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * dy);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dy);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dy);
  return d;
}

inline double total_variation(const Field &f) {
  double tv = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) tv += std::abs(f[k] - f[k - 1]);
  return tv;
}

inline double gradient_max(const Field &f, double dy) {
  double g = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) g = std::max(g, std::abs(f[k] - f[k - 1]) / dy);
  return g;
}

inline double max_abs(const Field &f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

/// Both sides of b h_y + h b_y / 2 = -f u on a flat bottom.
struct BalanceFields {
  Field lhs;
  Field rhs;
};

inline BalanceFields balance_residual(const ConservedState &s, const CoriolisSpec &coriolis,
                                      const Grid &grid, const Topography &topo, double eps = 1e-8) {
  if (!topo.is_flat()) throw DiagnosticError("balance residual requires a flat bottom");
  const Primitives prim = primitives_from_state(s, topo, eps);
  const Field hy = derivative(s.h, grid.dy());
  const Field by = derivative(prim.b, grid.dy());
  BalanceFields out{Field(s.size()), Field(s.size())};
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.lhs[k] = prim.b[k] * hy[k] + 0.5 * s.h[k] * by[k];
    out.rhs[k] = -coriolis(grid.center(k)) * prim.u[k];
  }
  return out;
}

/// Trapezoidal time integrals of both balance sides from a start time on.
class TimeAveragedBalance {
public:
  explicit TimeAveragedBalance(double t_start) : t_start_(t_start) {}

  double t_start() const noexcept { return t_start_; }

  /// Feeds one accepted state; samples before t_start are ignored.
  void add(double t, const BalanceFields &sides) {
    if (t < t_start_) return;
    if (!last_t_) {
      first_t_ = t;
      lhs_int_.assign(sides.lhs.size(), 0.0);
      rhs_int_.assign(sides.rhs.size(), 0.0);
    } else {
      const double w = 0.5 * (t - *last_t_);
      for (std::size_t k = 0; k < lhs_int_.size(); ++k) {
        lhs_int_[k] += w * (last_.lhs[k] + sides.lhs[k]);
        rhs_int_[k] += w * (last_.rhs[k] + sides.rhs[k]);
      }
    }
    last_ = sides;
    last_t_ = t;
  }

  double window() const noexcept { return last_t_ ? *last_t_ - first_t_ : 0.0; }

  /// Time averages over the accumulated window.
  BalanceFields finalize() const {
    const double len = window();
    if (!(len > 0.0)) throw DiagnosticError("time-averaged balance: empty averaging window");
    BalanceFields avg{lhs_int_, rhs_int_};
    for (std::size_t k = 0; k < avg.lhs.size(); ++k) {
      avg.lhs[k] /= len;
      avg.rhs[k] /= len;
    }
    return avg;
  }

private:
  double t_start_;
  double first_t_ = 0.0;
  std::optional<double> last_t_;
  BalanceFields last_;
  Field lhs_int_;
  Field rhs_int_;
};

/// E = sum over cells of [h (u^2 + v^2) / 2 + b h^2 / 2] dy (flat bottom).
inline double energy(const ConservedState &s, const Grid &grid, const Topography &topo,
                     double eps = 1e-8) {
  if (!topo.is_flat()) throw DiagnosticError("energy requires a flat bottom");
  const Primitives prim = primitives_from_state(s, topo, eps);
  double e = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double h = s.h[k];
    e += 0.5 * h * (prim.u[k] * prim.u[k] + prim.v[k] * prim.v[k]) + 0.5 * prim.b[k] * h * h;
  }
  return e * grid.dy();
}

/// Q = (f - u_y) / h, desingularized in h.
inline Field potential_vorticity(const ConservedState &s, const CoriolisSpec &coriolis,
                                 const Grid &grid, double eps = 1e-8) {
  Field u(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) u[k] = desingularized_ratio(s.q[k], s.h[k], eps);
  const Field uy = derivative(u, grid.dy());
  Field Q(s.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    Q[k] = desingularized_ratio(coriolis(grid.center(k)) - uy[k], s.h[k], eps);
  return Q;
}

struct RossbyBurger {
  double rossby = 0.0;
  double burger = 0.0;
};

/// Ro = U0 / (beta L^2), Bu = sqrt(b H0) / (beta L^2).
inline RossbyBurger rossby_burger(double u0, double width, double h0, double b_mean, double beta) {
  if (!(width > 0.0) || !(beta > 0.0)) throw DiagnosticError("rossby_burger: width and beta must be positive");
  const double scale = beta * width * width;
  return {u0 / scale, std::sqrt(b_mean * h0) / scale};
}

/// Inertia-gravity dispersion relation omega^2 = f^2 + b h k^2.
inline double inertia_gravity_frequency(double f, double bh, double k) {
  return std::sqrt(f * f + bh * k * k);
}

/// Nondimensional trapped equatorial eigenfrequency sqrt(2n + 1).
inline double equatorial_frequency(unsigned n) { return std::sqrt(2.0 * n + 1.0); }

/// Equatorial inertial period 2 pi / sqrt(beta sqrt(b0 H0)).
inline double equatorial_inertial_period(double beta, double b0, double h0) {
  return 2.0 * std::numbers::pi / std::sqrt(beta * std::sqrt(b0 * h0));
}

/// One row of the diagnostics time series.
struct DiagnosticsRecord {
  double t = 0.0;
  double total_mass = 0.0;
  double total_hb = 0.0;
  double mass_drift = 0.0;
  double hb_drift = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();  ///< NaN for nonflat bottoms
  double max_abs_v = 0.0;
  double max_grad_v = 0.0;
  double tv_w = 0.0;
};

/// Builds DiagnosticsRecords from StepEvents. The drift is the change of
/// sum(U) dy minus the time integral of the applied boundary inflow, which
/// is zero up to round-off for the conservative update.
class ConservationLedger {
public:
  explicit ConservationLedger(const Scenario &sc) : sc_(&sc) {}

  DiagnosticsRecord record(const StepEvent &ev) {
    const Grid &grid = sc_->grid;
    const ConservedState &s = *ev.state;
    const double dy = grid.dy();
    double mass = 0.0, hb = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      mass += s.h[k];
      hb += s.hb[k];
    }
    mass *= dy;
    hb *= dy;
    if (!initialized_) {
      mass0_ = mass;
      hb0_ = hb;
      initialized_ = true;
    }
    if (ev.report) {
      outflow_h_ += ev.report->dt * ev.report->boundary_outflow_h;
      outflow_hb_ += ev.report->dt * ev.report->boundary_outflow_hb;
    }
    DiagnosticsRecord r;
    r.t = ev.t;
    r.total_mass = mass;
    r.total_hb = hb;
    r.mass_drift = (mass - mass0_) + outflow_h_;
    r.hb_drift = (hb - hb0_) + outflow_hb_;
    const double eps = sc_->numerics.eps_desing;
    const Primitives prim = primitives_from_state(s, sc_->topography, eps);
    if (sc_->topography.is_flat()) r.energy = energy(s, grid, sc_->topography, eps);
    r.max_abs_v = max_abs(prim.v);
    r.max_grad_v = gradient_max(prim.v, dy);
    r.tv_w = total_variation(prim.w);
    return r;
  }

private:
  const Scenario *sc_;
  bool initialized_ = false;
  double mass0_ = 0.0;
  double hb0_ = 0.0;
  double outflow_h_ = 0.0;
  double outflow_hb_ = 0.0;
};

}  // namespace trsw
