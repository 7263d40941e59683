#pragma once
/// \file core_model.hpp
/// \brief Grid, state, topography and Coriolis data shared by the solver.
///
/// All types here are value objects. Once built they are only read, so a
/// single instance may be shared between threads without synchronization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trsw {

/// Raised for invalid user-facing configuration (grid, scenario, CLI).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when the time integration produces a non-finite value.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string &what, double t)
      : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

using Field = std::vector<double>;

/// Uniform 1-D grid of N cells on [y_min, y_max].
class Grid {
public:
  static constexpr std::size_t kMinCells = 2;

  Grid(double y_min, double y_max, std::size_t cells)
      : y_min_(y_min), y_max_(y_max), cells_(cells) {
    if (!(y_max > y_min) || !std::isfinite(y_min) || !std::isfinite(y_max))
      throw ConfigError("grid: require finite y_min < y_max");
    if (cells < kMinCells)
      throw ConfigError("grid: at least " + std::to_string(kMinCells) +
                        " cells required, got " + std::to_string(cells));
    dy_ = (y_max - y_min) / static_cast<double>(cells);
  }

  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  std::size_t size() const noexcept { return cells_; }
  double dy() const noexcept { return dy_; }
  double length() const noexcept { return y_max_ - y_min_; }

  /// Interface y_{i+1/2} in 0-based numbering: interface(0) = y_min,
  /// interface(N) = y_max.
  double interface(std::size_t i) const noexcept {
    if (i == cells_) return y_max_;
    return y_min_ + static_cast<double>(i) * dy_;
  }

  /// Center of cell i (0-based).
  double center(std::size_t i) const noexcept {
    return interface(i) + 0.5 * dy_;
  }

  Field centers() const {
    Field c(cells_);
    for (std::size_t i = 0; i < cells_; ++i) c[i] = center(i);
    return c;
  }

private:
  double y_min_;
  double y_max_;
  std::size_t cells_;
  double dy_;
};

inline Grid build_grid(double y_min, double y_max, long long cells) {
  if (cells <= 0) throw ConfigError("grid: cell count must be positive");
  return Grid(y_min, y_max, static_cast<std::size_t>(cells));
}

/// Cell averages of the conserved variables (h, q = hu, p = hv, hb).
struct ConservedState {
  Field h;
  Field q;
  Field p;
  Field hb;

  ConservedState() = default;
  explicit ConservedState(std::size_t n) : h(n, 0.0), q(n, 0.0), p(n, 0.0), hb(n, 0.0) {}
  ConservedState(Field h_, Field q_, Field p_, Field hb_)
      : h(std::move(h_)), q(std::move(q_)), p(std::move(p_)), hb(std::move(hb_)) {}

  std::size_t size() const noexcept { return h.size(); }

  bool operator==(const ConservedState &) const = default;

  template <class Fn> void for_each_component(Fn &&fn) {
    fn(h); fn(q); fn(p); fn(hb);
  }
  template <class Fn> void for_each_component(Fn &&fn) const {
    fn(h); fn(q); fn(p); fn(hb);
  }
};

/// Bottom elevation at interfaces (N+1 values) and cell centers (N values).
/// Centers are always midpoints of the adjacent interface values.
class Topography {
public:
  Topography() = default;

  explicit Topography(Field iface) : iface_(std::move(iface)) {
    if (iface_.size() < 2) throw ConfigError("topography: need at least two interface values");
    center_.resize(iface_.size() - 1);
    for (std::size_t k = 0; k + 1 < iface_.size(); ++k)
      center_[k] = 0.5 * (iface_[k] + iface_[k + 1]);
  }

  static Topography flat(std::size_t cells) { return Topography(Field(cells + 1, 0.0)); }

  const Field &iface() const noexcept { return iface_; }
  const Field &center() const noexcept { return center_; }

  bool is_flat() const noexcept {
    return std::all_of(iface_.begin(), iface_.end(), [](double z) { return z == 0.0; });
  }

private:
  Field iface_;
  Field center_;
};

using ScalarFunction = std::function<double(double)>;

/// Averages the one-sided limits of Z at every interface. A continuous
/// bottom passes the same function for both sides.
inline Topography sample_topography(const ScalarFunction &z_left_limit,
                                    const ScalarFunction &z_right_limit,
                                    const Grid &grid) {
  Field iface(grid.size() + 1);
  for (std::size_t i = 0; i <= grid.size(); ++i) {
    const double y = grid.interface(i);
    iface[i] = 0.5 * (z_left_limit(y) + z_right_limit(y));
  }
  return Topography(std::move(iface));
}

inline Topography sample_topography(const ScalarFunction &z, const Grid &grid) {
  return sample_topography(z, z, grid);
}

/// f(y) = f0 + beta * y. A constant parameter is the beta = 0 case.
struct CoriolisSpec {
  double f0 = 0.0;
  double beta = 0.0;

  static CoriolisSpec constant(double f0) { return {f0, 0.0}; }
  static CoriolisSpec linear(double f0, double beta) { return {f0, beta}; }

  double operator()(double y) const noexcept { return f0 + beta * y; }
  bool is_constant() const noexcept { return beta == 0.0; }
  bool is_zero() const noexcept { return f0 == 0.0 && beta == 0.0; }
};

/// Numerical parameters of the scheme.
struct Numerics {
  double cfl = 0.5;
  double sigma = 1.3;            ///< generalized minmod parameter, in [1, 2]
  double eps_desing = 1e-8;      ///< desingularization threshold
  double switch_c = 400.0;       ///< diffusion switch scale C
  int switch_m = 8;              ///< diffusion switch exponent m

  void validate() const {
    if (!(cfl > 0.0) || !(cfl <= 1.0)) throw ConfigError("numerics: cfl must lie in (0, 1]");
    if (!(sigma >= 1.0 && sigma <= 2.0)) throw ConfigError("numerics: sigma must lie in [1, 2]");
    if (!(eps_desing > 0.0)) throw ConfigError("numerics: eps must be positive");
    if (!(switch_c > 0.0) || switch_m <= 0) throw ConfigError("numerics: switch constants must be positive");
  }
};

/// Bounded replacement for num/den that stays finite as den -> 0:
/// 2 den num / (den^2 + max(den^2, eps^2)).
inline double desingularized_ratio(double num, double den, double eps) noexcept {
  const double d2 = den * den;
  const double denom = d2 + std::max(d2, eps * eps);
  if (denom == 0.0) return 0.0;
  return 2.0 * den * num / denom;
}

/// Primitive fields recovered from cell averages.
struct Primitives {
  Field u;
  Field v;
  Field b;
  Field w;
};

inline Primitives primitives_from_state(const ConservedState &s, const Topography &topo,
                                        double eps) {
  const std::size_t n = s.size();
  Primitives out{Field(n), Field(n), Field(n), Field(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.u[k] = desingularized_ratio(s.q[k], s.h[k], eps);
    out.v[k] = desingularized_ratio(s.p[k], s.h[k], eps);
    out.b[k] = desingularized_ratio(s.hb[k], s.h[k], eps);
    out.w[k] = s.h[k] + topo.center()[k];
  }
  return out;
}

inline bool all_finite(const ConservedState &s) {
  bool ok = true;
  s.for_each_component([&](const Field &f) {
    for (double x : f) ok = ok && std::isfinite(x);
  });
  return ok;
}

/// A fully specified run: grid, physics, initial cell averages, output times.
struct Scenario {
  std::string name;
  Grid grid{0.0, 1.0, Grid::kMinCells};
  CoriolisSpec coriolis;
  Topography topography = Topography::flat(Grid::kMinCells);
  ConservedState initial{Grid::kMinCells};
  double t_final = 0.0;
  Numerics numerics;
  std::vector<double> snapshots;

  void validate() const {
    numerics.validate();
    if (!(t_final >= 0.0) || !std::isfinite(t_final))
      throw ConfigError("scenario: t_final must be finite and nonnegative");
    if (initial.size() != grid.size() || topography.center().size() != grid.size())
      throw ConfigError("scenario: field sizes do not match the grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!(initial.h[k] >= 0.0) || !(initial.hb[k] >= 0.0))
        throw ConfigError("scenario: h and hb must be nonnegative");
    }
    if (!all_finite(initial)) throw ConfigError("scenario: non-finite initial data");
    for (double t : snapshots)
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("scenario: bad snapshot time");
  }
};

}  // namespace trsw
