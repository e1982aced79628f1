#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include "swsed/grid.hpp"
#include "swsed/params.hpp"
#include "swsed/physics.hpp"
#include "swsed/state.hpp"

namespace swsed {

enum class LimitingTerm { advective_particle, gravity_wave, bed_diffusion };

inline std::string_view to_string(LimitingTerm t) {
  switch (t) {
    case LimitingTerm::advective_particle: return "advective_particle";
    case LimitingTerm::gravity_wave: return "gravity_wave";
    case LimitingTerm::bed_diffusion: return "bed_diffusion";
  }
  return "?";
}

struct DtResult {
  double tau = 0.0;
  LimitingTerm limiting_term = LimitingTerm::advective_particle;
  std::int64_t limiting_cell = -1;  ///< global cell index, -1 when no wet cell exists
};

/// Running maxima of the three stability quantities. Ties keep the lowest
/// global cell index, so merging partial accumulators in any grouping gives
/// the same result as a single pass in global order.
struct DtAccumulator {
  double v_p = 0.0;
  double v_s = 0.0;
  double d = 0.0;
  std::int64_t cell_p = -1;
  std::int64_t cell_s = -1;
  std::int64_t cell_d = -1;
  bool any_wet = false;

  static void take(double value, std::int64_t cell, double& best, std::int64_t& best_cell) {
    if (best_cell < 0 || value > best || (value == best && cell < best_cell)) {
      best = value;
      best_cell = cell;
    }
  }

  /// Adds one wet cell.
  void add(const PhysParams& p, double H, double hu, double hv, double n_manning, std::int64_t cell) {
    any_wet = true;
    const double u = hu / H, v = hv / H;
    const double speed = std::sqrt(u * u + v * v);
    take(speed, cell, v_p, cell_p);
    take(speed + std::sqrt(p.g * H), cell, v_s, cell_s);
    if (p.transport_enabled()) {
      const double j0 = grass_flux(Vec2{u, v}, grass_coefficient(p, n_manning, H), p.m_exp).norm();
      take(j0 / (1.0 - p.psi), cell, d, cell_d);
    }
  }

  void merge(const DtAccumulator& o) {
    any_wet = any_wet || o.any_wet;
    if (o.cell_p >= 0) take(o.v_p, o.cell_p, v_p, cell_p);
    if (o.cell_s >= 0) take(o.v_s, o.cell_s, v_s, cell_s);
    if (o.cell_d >= 0) take(o.d, o.cell_d, d, cell_d);
  }

  /// tau = K min(h / (2 v_p), h / v_s, h^2 / (2 D)), capped at dt_max.
  DtResult finish(double k_cfl, double h, double dt_max) const {
    DtResult r;
    if (!any_wet) {
      r.tau = dt_max;
      return r;
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double t_p = v_p > 0.0 ? h / (2.0 * v_p) : inf;
    const double t_s = v_s > 0.0 ? h / v_s : inf;
    const double t_d = d > 0.0 ? h * h / (2.0 * d) : inf;
    double best = t_p;
    r.limiting_term = LimitingTerm::advective_particle;
    r.limiting_cell = cell_p;
    if (t_s < best) {
      best = t_s;
      r.limiting_term = LimitingTerm::gravity_wave;
      r.limiting_cell = cell_s;
    }
    if (t_d < best) {
      best = t_d;
      r.limiting_term = LimitingTerm::bed_diffusion;
      r.limiting_cell = cell_d;
    }
    r.tau = std::min(k_cfl * best, dt_max);
    return r;
  }
};

/// Stability-limited time step over all wet cells of `state`.
/// An all-dry domain returns dt_max.
inline DtResult compute_dt(const FlowState& state, const PhysParams& params, const SimGrid& grid,
                           double dt_max = 1.0e6, double k_override = 0.0) {
  DtAccumulator acc;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double H = state.H(i, j);
      if (H <= params.eps_dry) continue;
      acc.add(params, H, state.hu(i, j), state.hv(i, j), params.manning(i, j),
              static_cast<std::int64_t>(grid.index(i, j)));
    }
  }
  return acc.finish(k_override > 0.0 ? k_override : params.k_cfl, grid.h, dt_max);
}

}  // namespace swsed
