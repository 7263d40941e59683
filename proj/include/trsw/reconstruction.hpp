#pragma once
/// \file reconstruction.hpp
/// \brief Well-balanced reconstruction of the equilibrium variables
/// (q, p, L, b) and recovery of one-sided interface depths.
///
/// The global variable L = p^2/h + b h^2 / 2 + R carries the integrated
/// Coriolis and topography sources R. Reconstructing L instead of h makes
/// the thermo-geostrophic states p = 0, L = const exact fixed points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "trsw/core_model.hpp"

namespace trsw {

inline constexpr std::size_t kGhostCells = 2;

/// min of the arguments if all are positive, max if all are negative, else 0.
template <class... Rest>
constexpr double minmod(double first, Rest... rest) noexcept {
  const bool all_pos = first > 0.0 && ((rest > 0.0) && ...);
  const bool all_neg = first < 0.0 && ((rest < 0.0) && ...);
  if (all_pos) return std::min({first, static_cast<double>(rest)...});
  if (all_neg) return std::max({first, static_cast<double>(rest)...});
  return 0.0;
}

/// Copies a cell field into a buffer with kGhostCells constant-extended
/// ghosts on each side.
inline Field pad_constant(const Field &f) {
  Field out(f.size() + 2 * kGhostCells);
  std::copy(f.begin(), f.end(), out.begin() + kGhostCells);
  for (std::size_t g = 0; g < kGhostCells; ++g) {
    out[g] = f.front();
    out[out.size() - 1 - g] = f.back();
  }
  return out;
}

/// b_k = hb_k / h_k, desingularized.
inline Field compute_b_centers(const ConservedState &s, double eps) {
  Field b(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) b[k] = desingularized_ratio(s.hb[k], s.h[k], eps);
  return b;
}

struct GlobalFlux {
  Field center;  ///< R_k, N values
  Field iface;   ///< R_{k+1/2}, N+1 values, iface[0] = 0
};

/// Integrates f q + h b Z_y with the datum R at the left boundary set to 0.
inline GlobalFlux compute_R(const ConservedState &s, const Topography &topo,
                            const CoriolisSpec &coriolis, const Grid &grid) {
  const std::size_t n = grid.size();
  const double dy = grid.dy();
  const Field &zi = topo.iface();
  const Field &zc = topo.center();
  GlobalFlux r{Field(n), Field(n + 1)};

  r.iface[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = coriolis(grid.center(k));
    r.iface[k + 1] = r.iface[k] + fk * s.q[k] * dy + s.hb[k] * (zi[k + 1] - zi[k]);
  }

  r.center[0] = 0.5 * (r.iface[0] + r.iface[1]);
  double f_prev = coriolis(grid.center(0));
  for (std::size_t k = 1; k < n; ++k) {
    const double fk = coriolis(grid.center(k));
    r.center[k] = r.center[k - 1] + 0.5 * (f_prev * s.q[k - 1] + fk * s.q[k]) * dy +
                  0.5 * (s.hb[k - 1] + s.hb[k]) * (zc[k] - zc[k - 1]);
    f_prev = fk;
  }
  return r;
}

/// L_k = p_k^2 / h_k + hb_k h_k / 2 + R_k with a desingularized kinetic term.
inline Field compute_L_centers(const ConservedState &s, const Field &r_center, double eps) {
  Field L(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double kinetic = s.p[k] * desingularized_ratio(s.p[k], s.h[k], eps);
    L[k] = kinetic + 0.5 * s.hb[k] * s.h[k] + r_center[k];
  }
  return L;
}

/// One-sided values at every interface i = 0..N (interface i separates
/// cells i-1 and i; cells -1 and N are ghosts).
struct OneSidedValues {
  Field minus;
  Field plus;
};

/// Generalized minmod slope of a padded field at padded index j.
inline double limited_slope(const Field &padded, std::size_t j, double sigma, double dy) {
  const double back = padded[j] - padded[j - 1];
  const double fwd = padded[j + 1] - padded[j];
  return minmod(sigma * back / dy, 0.5 * (padded[j + 1] - padded[j - 1]) / dy, sigma * fwd / dy);
}

/// Piecewise linear reconstruction of a padded field (kGhostCells per side).
/// Returns N+1 interface values from each side.
inline OneSidedValues reconstruct_V(const Field &padded, double sigma, double dy) {
  const std::size_t n = padded.size() - 2 * kGhostCells;
  OneSidedValues out{Field(n + 1), Field(n + 1)};
  const double half = 0.5 * dy;
  // cell j (padded) holds physical cell j - kGhostCells
  Field slope(padded.size(), 0.0);
  for (std::size_t j = 1; j + 1 < padded.size(); ++j) slope[j] = limited_slope(padded, j, sigma, dy);
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t left = i + kGhostCells - 1;
    const std::size_t right = left + 1;
    out.minus[i] = padded[left] + half * slope[left];
    out.plus[i] = padded[right] - half * slope[right];
  }
  return out;
}

/// Depths obtained from the reconstructed surface w = h + Z, clipped at 0.
inline OneSidedValues fallback_interface_h(const ConservedState &s, const Topography &topo,
                                           double sigma, double dy) {
  Field w(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) w[k] = s.h[k] + topo.center()[k];
  OneSidedValues rec = reconstruct_V(pad_constant(w), sigma, dy);
  const Field &zi = topo.iface();
  for (std::size_t i = 0; i < zi.size(); ++i) {
    rec.minus[i] = std::max(rec.minus[i] - zi[i], 0.0);
    rec.plus[i] = std::max(rec.plus[i] - zi[i], 0.0);
  }
  return rec;
}

/// Positive solution h of p^2/h + b h^2/2 + R - L = 0, or h_fallback when no
/// positive solution exists. Of the two positive roots (supersonic and
/// subsonic) the one closest to h_select is returned; h_select defaults to
/// h_fallback.
inline double solve_interface_h(double p, double b_mid, double L, double R, double h_fallback,
                                double h_select = -1.0) {
  if (h_select < 0.0) h_select = h_fallback;
  const double D = L - R;
  if (!(b_mid > 0.0)) return h_fallback;
  if (p == 0.0) return D > 0.0 ? std::sqrt(2.0 * D / b_mid) : h_fallback;
  if (D <= 0.0) return h_fallback;

  const double p2 = p * p;
  if (p2 * p2 > 8.0 * D * D * D / (27.0 * b_mid)) return h_fallback;

  const double upsilon = 2.0 * D / (3.0 * b_mid);
  const double arg = std::clamp(-p2 / (b_mid * upsilon * std::sqrt(upsilon)), -1.0, 1.0);
  const double theta = std::acos(arg);
  const double amp = 2.0 * std::sqrt(upsilon);

  double best = h_fallback;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int l = 0; l < 3; ++l) {
    const double root = amp * std::cos((theta + 2.0 * std::numbers::pi * l) / 3.0);
    if (!(root > 0.0)) continue;
    const double dist = std::abs(root - h_select);
    // ties go to the larger (subsonic) root
    if (dist < best_dist || (dist == best_dist && root > best)) {
      best = root;
      best_dist = dist;
    }
  }
  return best;
}

/// One side of an interface.
struct InterfaceSide {
  double h = 0.0;
  double q = 0.0;
  double p = 0.0;
  double b = 0.0;
  double L = 0.0;
  double v = 0.0;
};

/// Reconstructed data at all N+1 interfaces of the grid, including the two
/// boundary interfaces adjacent to ghost cells.
struct InterfaceStates {
  std::vector<InterfaceSide> minus;
  std::vector<InterfaceSide> plus;
  Field b_mid;
  Field R;
  Field L_center;  ///< padded cell values of L (kGhostCells per side)

  std::size_t size() const noexcept { return minus.size(); }
};

inline InterfaceStates build_interface_states(const ConservedState &s, const Topography &topo,
                                              const CoriolisSpec &coriolis, const Grid &grid,
                                              const Numerics &num) {
  const double eps = num.eps_desing;
  const double dy = grid.dy();
  const std::size_t n = grid.size();

  const Field b = compute_b_centers(s, eps);
  const GlobalFlux R = compute_R(s, topo, coriolis, grid);
  const Field L = compute_L_centers(s, R.center, eps);

  const OneSidedValues q_rec = reconstruct_V(pad_constant(s.q), num.sigma, dy);
  const OneSidedValues p_rec = reconstruct_V(pad_constant(s.p), num.sigma, dy);
  Field L_padded = pad_constant(L);
  const OneSidedValues L_rec = reconstruct_V(L_padded, num.sigma, dy);
  const OneSidedValues b_rec = reconstruct_V(pad_constant(b), num.sigma, dy);
  const OneSidedValues h_fb = fallback_interface_h(s, topo, num.sigma, dy);

  InterfaceStates out;
  out.minus.resize(n + 1);
  out.plus.resize(n + 1);
  out.b_mid.resize(n + 1);
  out.R = R.iface;
  out.L_center = std::move(L_padded);

  for (std::size_t i = 0; i <= n; ++i) {
    const double bm = 0.5 * (b_rec.plus[i] + b_rec.minus[i]);
    out.b_mid[i] = bm;

    auto fill = [&](InterfaceSide &side, double q, double p, double Lv, double bv, double hfb,
                    double h_cell) {
      side.q = q;
      side.L = Lv;
      side.b = bv;
      side.h = solve_interface_h(p, bm, Lv, R.iface[i], hfb, h_cell);
      side.v = desingularized_ratio(p, side.h, eps);
      side.p = side.h * side.v;
    };
    // the subsonic/supersonic branch follows the depth of the cell the
    // one-sided value comes from
    const double h_left = s.h[i == 0 ? 0 : i - 1];
    const double h_right = s.h[i == n ? n - 1 : i];
    fill(out.minus[i], q_rec.minus[i], p_rec.minus[i], L_rec.minus[i], b_rec.minus[i], h_fb.minus[i], h_left);
    fill(out.plus[i], q_rec.plus[i], p_rec.plus[i], L_rec.plus[i], b_rec.plus[i], h_fb.plus[i], h_right);
  }
  return out;
}

}  // namespace trsw
