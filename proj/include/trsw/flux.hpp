#pragma once
/// \file flux.hpp
/// \brief Central-upwind numerical flux with a diffusion switch on the
/// q and hb components.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "trsw/reconstruction.hpp"

namespace trsw {

/// Four components matching (h, q, p, hb).
using Vec4 = std::array<double, 4>;

struct LocalSpeeds {
  double a_plus = 0.0;   ///< >= 0
  double a_minus = 0.0;  ///< <= 0

  double max_abs() const noexcept { return std::max(a_plus, -a_minus); }
};

/// One-sided speed bounds v -+ sqrt(h b), with 0 included in both extrema.
inline LocalSpeeds local_speeds(double v_minus, double v_plus, double h_minus, double h_plus,
                                double b_minus, double b_plus) {
  const double hb_m = h_minus * b_minus;
  const double hb_p = h_plus * b_plus;
  if (hb_m < 0.0 || hb_p < 0.0) throw std::domain_error("local_speeds: negative h*b");
  const double c_m = std::sqrt(hb_m);
  const double c_p = std::sqrt(hb_p);
  return {std::max({v_minus + c_m, v_plus + c_p, 0.0}),
          std::min({v_minus - c_m, v_plus - c_p, 0.0})};
}

inline Vec4 intermediate_state(const Vec4 &u_minus, const Vec4 &u_plus, const Vec4 &g_minus,
                               const Vec4 &g_plus, const LocalSpeeds &a) {
  const double inv = 1.0 / (a.a_plus - a.a_minus);
  Vec4 star{};
  for (std::size_t c = 0; c < 4; ++c)
    star[c] = (a.a_plus * u_plus[c] - a.a_minus * u_minus[c] - (g_plus[c] - g_minus[c])) * inv;
  return star;
}

inline Vec4 anti_diffusion(const Vec4 &u_minus, const Vec4 &u_plus, const Vec4 &u_star) {
  Vec4 d{};
  for (std::size_t c = 0; c < 4; ++c) d[c] = minmod(u_plus[c] - u_star[c], u_star[c] - u_minus[c]);
  return d;
}

/// H as a function of x = C psi.
inline double switch_function(double x, int m) {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0 / (1.0 + std::pow(x, -m));
  const double xm = std::pow(x, m);
  return xm / (1.0 + xm);
}

/// Smooth cut-off H(psi) = (C psi)^m / (1 + (C psi)^m) with
/// psi = |dL|/dy * length / max(L_k, L_{k+1}).
inline double diffusion_switch(double L_k, double L_k1, double dy, double domain_length, double C,
                               int m) {
  constexpr double kGuard = 1e-300;
  double scale = std::max(L_k, L_k1);
  if (!(scale > kGuard)) scale = std::max({std::abs(L_k), std::abs(L_k1), kGuard});
  const double psi = std::abs(L_k1 - L_k) / dy * (domain_length / scale);
  return switch_function(C * psi, m);
}

inline Vec4 conserved_vector(const InterfaceSide &s) { return {s.h, s.q, s.p, s.h * s.b}; }

inline Vec4 physical_flux(const InterfaceSide &s) { return {s.p, s.q * s.v, s.L, s.p * s.b}; }

/// Flux through one interface. Components 1 and 3 carry the full
/// central-upwind diffusion; components 2 and 4 scale it by switch_h.
inline Vec4 numerical_flux(const InterfaceSide &minus, const InterfaceSide &plus, double switch_h,
                           LocalSpeeds *speeds_out = nullptr) {
  const LocalSpeeds a = local_speeds(minus.v, plus.v, minus.h, plus.h, minus.b, plus.b);
  if (speeds_out) *speeds_out = a;
  const Vec4 gm = physical_flux(minus);
  const Vec4 gp = physical_flux(plus);

  constexpr double kDegenerate = 1e-12;
  const double span = a.a_plus - a.a_minus;
  if (span < kDegenerate) {
    return {0.5 * (gm[0] + gp[0]), 0.5 * (gm[1] + gp[1]), 0.5 * (gm[2] + gp[2]),
            0.5 * (gm[3] + gp[3])};
  }

  const Vec4 um = conserved_vector(minus);
  const Vec4 up = conserved_vector(plus);
  const Vec4 star = intermediate_state(um, up, gm, gp, a);
  const Vec4 delta = anti_diffusion(um, up, star);

  const double inv = 1.0 / span;
  const double diff = a.a_plus * a.a_minus * inv;
  const std::array<double, 4> weight{1.0, switch_h, 1.0, switch_h};
  Vec4 g{};
  for (std::size_t c = 0; c < 4; ++c)
    g[c] = (a.a_plus * gm[c] - a.a_minus * gp[c]) * inv +
           weight[c] * diff * (up[c] - um[c] - delta[c]);
  return g;
}

}  // namespace trsw
