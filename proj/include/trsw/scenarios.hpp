#pragma once
/// \file scenarios.hpp
/// \brief Factories for the benchmark problems and for user-defined runs.
///
/// Initial cell averages are formed by midpoint sampling. Where a problem is
/// posed in terms of the surface w = h + Z, the depth is taken as
/// w(y_k) - Z_k with the cell-center bottom Z_k, so a flat surface is an
/// exact discrete lake at rest.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trsw/core_model.hpp"

namespace trsw {

enum class ScenarioId {
  Ex1Steady,
  Ex1Perturbed,
  Ex2DamBreak,
  Ex3RossbyA,
  Ex3RossbyB,
  Ex3RossbyC,
  Ex4Breakdown,
  Ex5Equatorial,
  Ex6InertialInstability,
  LakeAtRest,
  ThermalRest,
  SmoothPulse,
};

struct ScenarioName {
  ScenarioId id;
  std::string_view name;
};

inline constexpr std::array<ScenarioName, 12> kScenarioNames{{
    {ScenarioId::Ex1Steady, "ex1-steady"},
    {ScenarioId::Ex1Perturbed, "ex1-perturbed"},
    {ScenarioId::Ex2DamBreak, "ex2"},
    {ScenarioId::Ex3RossbyA, "ex3a"},
    {ScenarioId::Ex3RossbyB, "ex3b"},
    {ScenarioId::Ex3RossbyC, "ex3c"},
    {ScenarioId::Ex4Breakdown, "ex4"},
    {ScenarioId::Ex5Equatorial, "ex5"},
    {ScenarioId::Ex6InertialInstability, "ex6"},
    {ScenarioId::LakeAtRest, "lake-at-rest"},
    {ScenarioId::ThermalRest, "thermal-rest"},
    {ScenarioId::SmoothPulse, "smooth-pulse"},
}};

inline ScenarioId parse_scenario_id(std::string_view name) {
  for (const auto &entry : kScenarioNames)
    if (entry.name == name) return entry.id;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

inline std::string_view scenario_name(ScenarioId id) {
  for (const auto &entry : kScenarioNames)
    if (entry.id == id) return entry.name;
  throw ConfigError("unknown scenario id");
}

/// Optional replacements for a factory's defaults.
struct ScenarioOverrides {
  std::optional<long long> cells;
  std::optional<double> t_final;
  std::optional<std::vector<double>> snapshots;
  std::optional<double> sigma;
  std::optional<double> cfl;
};

/// Initial condition as functions of y. `depth` is h, or the surface w when
/// `depth_is_surface` is set.
struct InitialProfile {
  ScalarFunction depth;
  bool depth_is_surface = false;
  ScalarFunction u = [](double) { return 0.0; };
  ScalarFunction v = [](double) { return 0.0; };
  ScalarFunction b = [](double) { return 1.0; };
};

inline ConservedState sample_initial(const InitialProfile &ic, const Grid &grid,
                                     const Topography &topo) {
  ConservedState s(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double y = grid.center(k);
    const double d = ic.depth(y);
    const double h = ic.depth_is_surface ? std::max(d - topo.center()[k], 0.0) : d;
    s.h[k] = h;
    s.q[k] = h * ic.u(y);
    s.p[k] = h * ic.v(y);
    s.hb[k] = h * ic.b(y);
  }
  return s;
}

/// Generic scenario from functions of y; `z_left`/`z_right` are the one-sided
/// limits of the bottom (pass the same function twice if continuous).
inline Scenario make_custom_scenario(std::string name, const Grid &grid, CoriolisSpec coriolis,
                                     const ScalarFunction &z_left, const ScalarFunction &z_right,
                                     const InitialProfile &ic, double t_final,
                                     std::vector<double> snapshots = {},
                                     Numerics numerics = {}) {
  Scenario sc;
  sc.name = std::move(name);
  sc.grid = grid;
  sc.coriolis = coriolis;
  sc.topography = sample_topography(z_left, z_right, grid);
  sc.initial = sample_initial(ic, grid, sc.topography);
  sc.t_final = t_final;
  sc.snapshots = std::move(snapshots);
  sc.numerics = numerics;
  return sc;
}

namespace bench {

inline double cos_hump(double y, double amplitude, double center, double half_width) {
  if (y < center - half_width || y > center + half_width) return 0.0;
  return amplitude * (std::cos(10.0 * std::numbers::pi * (y - center)) + 1.0);
}

/// Two-hump bottom of the steady-state perturbation problem.
inline double ex1_bottom(double y) {
  return cos_hump(y, 0.85, -0.9, 0.1) + cos_hump(y, 1.25, 0.4, 0.1);
}

/// Two-hump bottom of the dam-break problem.
inline double ex2_bottom(double y) {
  return cos_hump(y, 2.0, -0.3, 0.1) + cos_hump(y, 0.5, 0.3, 0.1);
}

/// Surface bump added to the steady state: 0.1 on the closed interval
/// [-1.5, -1.4].
inline double perturbation_bump(double y) { return (y >= -1.5 && y <= -1.4) ? 0.1 : 0.0; }

inline double ex3_jet(double y) {
  const double t2 = std::tanh(2.0);
  return 2.0 * (1.0 + std::tanh(2.0 * y + 2.0)) * (1.0 - std::tanh(2.0 * y - 2.0)) /
         ((1.0 + t2) * (1.0 + t2));
}

inline double ex4_v_hump(double y) {
  if (y <= -0.5 || y >= 0.5) return 0.0;
  return 0.1 * std::exp(-y * y) - 0.1 * std::exp(-0.25);
}

}  // namespace bench

inline std::size_t default_cells(ScenarioId id) {
  switch (id) {
    case ScenarioId::Ex1Steady:
    case ScenarioId::Ex1Perturbed: return 100;
    case ScenarioId::Ex2DamBreak:
    case ScenarioId::LakeAtRest:
    case ScenarioId::ThermalRest:
    case ScenarioId::SmoothPulse: return 200;
    case ScenarioId::Ex3RossbyA:
    case ScenarioId::Ex3RossbyB:
    case ScenarioId::Ex3RossbyC:
    case ScenarioId::Ex5Equatorial: return 6000;
    case ScenarioId::Ex4Breakdown: return 4000;
    case ScenarioId::Ex6InertialInstability: return 8000;
  }
  throw ConfigError("unknown scenario id");
}

inline Scenario make_scenario(ScenarioId id, const ScenarioOverrides &ov = {}) {
  using std::numbers::pi;
  const long long cells = ov.cells.value_or(static_cast<long long>(default_cells(id)));
  const auto zero = [](double) { return 0.0; };

  auto grid_on = [&](double a, double b) { return build_grid(a, b, cells); };

  Scenario sc;
  switch (id) {
    case ScenarioId::Ex1Steady:
    case ScenarioId::Ex1Perturbed: {
      const bool perturbed = id == ScenarioId::Ex1Perturbed;
      InitialProfile ic;
      ic.depth_is_surface = true;
      ic.depth = [perturbed](double y) {
        const double w = y < 0.0 ? 6.0 : 4.0;
        return perturbed ? w + bench::perturbation_bump(y) : w;
      };
      ic.b = [](double y) { return y < 0.0 ? 4.0 : 9.0; };
      sc = make_custom_scenario("", grid_on(-2.0, 2.0), CoriolisSpec::constant(0.0),
                                bench::ex1_bottom, bench::ex1_bottom, ic, 0.4, {0.1, 0.2, 0.4});
      break;
    }
    case ScenarioId::Ex2DamBreak: {
      InitialProfile ic;
      ic.depth_is_surface = true;
      ic.depth = [](double y) { return y < 0.0 ? 5.0 : 1.0; };
      ic.b = [](double y) { return y < 0.0 ? 1.0 : 5.0; };
      sc = make_custom_scenario("", grid_on(-1.0, 1.0), CoriolisSpec::constant(0.0),
                                bench::ex2_bottom, bench::ex2_bottom, ic, 0.3, {0.3});
      break;
    }
    case ScenarioId::Ex3RossbyA:
    case ScenarioId::Ex3RossbyB:
    case ScenarioId::Ex3RossbyC: {
      const double sign = id == ScenarioId::Ex3RossbyA ? 0.0 : (id == ScenarioId::Ex3RossbyB ? 1.0 : -1.0);
      InitialProfile ic;
      ic.depth = [](double) { return 1.0; };
      ic.u = bench::ex3_jet;
      ic.b = [sign](double y) { return 1.0 + sign * 0.1 * std::tanh(0.5 * y); };
      sc = make_custom_scenario("", grid_on(-250.0, 250.0), CoriolisSpec::constant(1.0), zero,
                                zero, ic, 19.2 * pi, {9.2 * pi, 19.2 * pi});
      break;
    }
    case ScenarioId::Ex4Breakdown: {
      InitialProfile ic;
      ic.depth = [](double) { return 1.0; };
      ic.u = [](double y) { const double t = std::tanh(y); return 3.0 - 3.0 * t * t; };
      ic.v = bench::ex4_v_hump;
      ic.b = [](double y) { return 10.0 - 6.0 * std::tanh(y); };
      sc = make_custom_scenario("", grid_on(-50.0, 50.0), CoriolisSpec::constant(1.0), zero, zero,
                                ic, 3.0, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
      break;
    }
    case ScenarioId::Ex5Equatorial: {
      InitialProfile ic;
      ic.depth = [](double) { return 0.121; };
      ic.u = [](double y) { return -0.1 * std::exp(-y * y); };
      ic.b = [](double y) { return 0.1 + 0.01 * std::exp(-y * y); };
      sc = make_custom_scenario("", grid_on(-250.0, 250.0), CoriolisSpec::linear(0.0, 0.1), zero,
                                zero, ic, 112.2 * pi,
                                {49.2 * pi, 69.2 * pi, 83.2 * pi, 112.2 * pi});
      break;
    }
    case ScenarioId::Ex6InertialInstability: {
      InitialProfile ic;
      ic.depth = [](double y) { return 0.11 - 0.05 * std::exp(-y * y); };
      ic.u = [](double y) { return -0.1 * std::exp(-y * y); };
      ic.b = [](double) { return 0.1; };
      sc = make_custom_scenario("", grid_on(-250.0, 250.0), CoriolisSpec::linear(0.0, 0.1), zero,
                                zero, ic, 3.5 * pi, {0.26 * pi, 0.94 * pi, 1.62 * pi, 3.5 * pi});
      break;
    }
    case ScenarioId::LakeAtRest: {
      InitialProfile ic;
      ic.depth_is_surface = true;
      ic.depth = [](double) { return 5.0; };
      ic.b = [](double) { return 1.0; };
      sc = make_custom_scenario("", grid_on(-1.0, 1.0), CoriolisSpec::constant(0.0),
                                bench::ex2_bottom, bench::ex2_bottom, ic, 0.3, {});
      break;
    }
    case ScenarioId::ThermalRest: {
      // b h^2 / 2 = 2 with a smooth buoyancy front
      InitialProfile ic;
      ic.b = [](double y) { return 1.0 + 0.5 * std::tanh(5.0 * y); };
      ic.depth = [b = ic.b](double y) { return std::sqrt(4.0 / b(y)); };
      sc = make_custom_scenario("", grid_on(-1.0, 1.0), CoriolisSpec::constant(0.0), zero, zero,
                                ic, 0.3, {});
      break;
    }
    case ScenarioId::SmoothPulse: {
      InitialProfile ic;
      ic.depth = [](double y) { return 1.0 + 0.1 * std::exp(-4.0 * y * y); };
      ic.b = [](double y) { return 1.0 + 0.1 * std::exp(-y * y); };
      sc = make_custom_scenario("", grid_on(-5.0, 5.0), CoriolisSpec::constant(0.0), zero, zero,
                                ic, 1.0, {});
      break;
    }
  }
  sc.name = std::string(scenario_name(id));

  if (ov.t_final) sc.t_final = *ov.t_final;
  if (ov.snapshots) sc.snapshots = *ov.snapshots;
  if (ov.sigma) sc.numerics.sigma = *ov.sigma;
  if (ov.cfl) sc.numerics.cfl = *ov.cfl;
  sc.validate();
  return sc;
}

inline Scenario make_scenario(std::string_view name, const ScenarioOverrides &ov = {}) {
  return make_scenario(parse_scenario_id(name), ov);
}

}  // namespace trsw
