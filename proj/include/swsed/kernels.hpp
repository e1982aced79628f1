#pragma once

// The eight pipeline stages of one time step, each acting on one partition.
//
//   K1  per-block wet/source counts
//   K2  Lagrangian forces at t_n
//   K3  partial stability reduction for the time step
//   K4  predictor: particles and state advanced to t_{n+1/2}
//   K5  Lagrangian forces on the half-step state
//   K6  corrector: Lagrangian full-step state
//   K7  face fluxes from the reconstructed half-step state
//   K8  conservative remap of the Lagrangian state plus face transfer, Exner update
//
// The Lagrangian force on a wet cell is the centred surface-gradient force
// -g H (eta_hi - eta_lo) / h plus Coriolis; the face pressure corrections that
// complete the hydrostatically reconstructed HLL flux are carried by the Euler
// stage in InterfaceFlux::mn_minus / mn_plus. A cell that is dry and has no
// source is "passive": every stage copies it unchanged, which is what makes
// block skipping exact.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "swsed/activeblocks.hpp"
#include "swsed/grid.hpp"
#include "swsed/params.hpp"
#include "swsed/partition.hpp"
#include "swsed/physics.hpp"
#include "swsed/reconstruct.hpp"
#include "swsed/riemann.hpp"
#include "swsed/timestep.hpp"

namespace swsed::kernels {

/// Read-only inputs shared by every stage of one step.
struct StageContext {
  const SimGrid* grid = nullptr;
  const PhysParams* params = nullptr;
  const SourceInputs* sources = nullptr;
  const ActiveBlockMap* map = nullptr;
  const BedExchangeClosure* closure = nullptr;
  bool dense = false;
  double dt = 0.0;
};

/// Per-partition findings of K4/K6/K8.
struct StageDiagnostics {
  double max_disp_predictor = 0.0;  ///< max |particle displacement| after K4 (m)
  double max_disp_corrector = 0.0;  ///< max |particle displacement increment| in K6 (m)
  bool unstable = false;
  std::int64_t bad_cell = -1;  ///< lowest global index of a failing cell
  double bad_depth = 0.0;

  void flag(std::int64_t cell, double depth) {
    if (!unstable || cell < bad_cell) {
      bad_cell = cell;
      bad_depth = depth;
    }
    unstable = true;
  }
};

/// Slopes of the predictor (K2/K4). The predictor only needs a consistent
/// local derivative, and a one-sided minmod slope would make it first order;
/// the monotonized-central slope is the central difference wherever the data
/// is monotone, which keeps the step second order in time.
inline constexpr Limiter predictor_limiter = Limiter::monotonized_central;

/// Negative depths below this are numerical failure rather than round-off.
inline constexpr double negative_depth_tolerance = 1e-12;

namespace detail {

enum class Activity { lagrangian, euler };

inline bool block_active(const StageContext& c, int bi, int bj, Activity a) {
  if (c.dense) return true;
  const int k = c.map->block(bi, bj);
  return a == Activity::lagrangian ? lagrangian_active(*c.map, k) : euler_active(*c.map, k);
}

/// Calls f(i, jl) for every owned cell of block (bi, bj).
template <class F>
void for_cells(const Partition& part, const SimGrid& g, int bi, int bj, F&& f) {
  const int i0 = bi * g.block_w, i1 = std::min(i0 + g.block_w, g.nx);
  const int j0 = bj * g.block_h, j1 = std::min(j0 + g.block_h, part.row_end);
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i) f(i, j - part.row_begin);
}

/// Calls f(bi, bj) for every block owned by the partition.
template <class F>
void for_blocks(const Partition& part, const SimGrid& g, F&& f) {
  for (int bj = part.block_row_begin; bj < part.block_row_end; ++bj)
    for (int bi = 0; bi < g.nbx(); ++bi) f(bi, bj);
}

inline std::int64_t global_index(const Partition& part, int i, int jl) {
  return static_cast<std::int64_t>(jl + part.row_begin) * part.nx + i;
}

inline bool passive(const Partition& part, std::size_t k, double eps) {
  return part.H[k] <= eps && part.source[k] == 0;
}

inline CellValues state_at(const Partition& p, std::size_t k) { return {p.H[k], p.hu[k], p.hv[k], p.b[k]}; }
inline CellValues half_at(const Partition& p, std::size_t k) { return {p.Hh[k], p.huh[k], p.hvh[k], p.b[k]}; }

/// Source rate plus surface-gradient and Coriolis force of one cell, written
/// into HL/huL/hvL. Dry cells feel no force and absorb nothing.
template <class Load>
void cell_forces(Partition& part, const PhysParams& p, Limiter lim, double h, std::size_t k, Load&& load) {
  const std::size_t w = static_cast<std::size_t>(part.stride());
  const CellValues c = load(k);
  const bool wet = c.H > p.eps_dry;
  part.HL[k] = part.source_rate[k] - (wet ? part.beta[k] * c.H : 0.0);
  if (!wet) {
    part.huL[k] = part.hvL[k] = 0.0;
    return;
  }
  const double sx = surface_slope(load(k - 1), c, load(k + 1), p.eps_dry, lim);
  const double sy = surface_slope(load(k - w), c, load(k + w), p.eps_dry, lim);
  const Vec2 a = coriolis(Vec2{c.hu / c.H, c.hv / c.H}, p.f_c);
  part.huL[k] = -p.g * c.H * sx / h + c.H * a.x;
  part.hvL[k] = -p.g * c.H * sy / h + c.H * a.y;
}

inline CellFaces faces_x(const Partition& part, const PhysParams& p, std::size_t k) {
  return reconstruct_cell(half_at(part, k - 1), half_at(part, k), half_at(part, k + 1), p.eps_dry, p.limiter);
}

inline CellFaces faces_y(const Partition& part, const PhysParams& p, std::size_t k) {
  const std::size_t w = static_cast<std::size_t>(part.stride());
  return reconstruct_cell(half_at(part, k - w), half_at(part, k), half_at(part, k + w), p.eps_dry, p.limiter);
}

/// Flux through one face from the reconstructions of its two cells. Wall
/// faces pass no mass, tangential momentum or sediment.
inline void store_flux(FaceArrays& out, std::size_t f, const Partition& part, const StageContext& c,
                       const FaceState& l, const FaceState& r, std::size_t kl, std::size_t kr, Axis axis,
                       bool wall) {
  const double dbdn = (part.b[kr] - part.b[kl]) / c.grid->h;
  const InterfaceFlux q = interface_flux(l, r, *c.params, dbdn, part.manning[kl], part.manning[kr], axis);
  out.mass[f] = wall ? 0.0 : q.mass;
  out.mn_minus[f] = q.mn_minus;
  out.mn_plus[f] = q.mn_plus;
  out.mt[f] = wall ? 0.0 : q.mt;
  out.sed[f] = wall ? 0.0 : q.sed;
}

}  // namespace detail

/// K1: wet/source counts of the partition's blocks, written into `map`.
inline void k1_activity(const Partition& part, const SimGrid& g, double eps_dry, ActiveBlockMap& map) {
  std::vector<int> scratch;
  detail::for_blocks(part, g, [&](int bi, int bj) {
    map.counts[static_cast<std::size_t>(map.block(bi, bj))] = count_block(
        g, bi, bj, eps_dry, [&](int i, int j) { return part.H[part.at(i, j - part.row_begin)]; },
        [&](int i, int j) { return part.source[part.at(i, j - part.row_begin)] != 0; }, scratch);
  });
}

/// K2: forces and source rates at t_n.
inline void k2_forces(Partition& part, const StageContext& c) {
  const PhysParams& p = *c.params;
  auto load = [&](std::size_t k) { return detail::state_at(part, k); };
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::lagrangian)) return;
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      if (detail::passive(part, k, p.eps_dry)) return;
      detail::cell_forces(part, p, predictor_limiter, c.grid->h, k, load);
    });
  });
}

/// K3: this partition's contribution to the stability reduction.
inline DtAccumulator k3_stability(const Partition& part, const StageContext& c) {
  const PhysParams& p = *c.params;
  DtAccumulator acc;
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::lagrangian)) return;
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      if (part.H[k] <= p.eps_dry) return;
      acc.add(p, part.H[k], part.hu[k], part.hv[k], part.manning[k], detail::global_index(part, i, jl));
    });
  });
  return acc;
}

/// K4: predictor. Particles move with the t_n velocity over dt/2 and carry
/// their mass and momentum, changed by the t_n forces and the local transport
/// of the cell's own reconstruction, to t_{n+1/2}.
inline void k4_predictor(Partition& part, const StageContext& c, StageDiagnostics& diag) {
  const PhysParams& p = *c.params;
  const double h = c.grid->h;
  const double half = 0.5 * c.dt;
  const std::size_t w = static_cast<std::size_t>(part.stride());
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::euler)) return;
    const bool lag = detail::block_active(c, bi, bj, detail::Activity::lagrangian);
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      if (!lag || detail::passive(part, k, p.eps_dry)) {
        part.Hh[k] = part.H[k];
        part.huh[k] = part.hu[k];
        part.hvh[k] = part.hv[k];
        part.pdx[k] = part.pdy[k] = 0.0;
        return;
      }
      const CellValues cv = detail::state_at(part, k);
      const CellFaces fx = reconstruct_cell(detail::state_at(part, k - 1), cv, detail::state_at(part, k + 1),
                                            p.eps_dry, predictor_limiter);
      const CellFaces fy = reconstruct_cell(detail::state_at(part, k - w), cv, detail::state_at(part, k + w),
                                            p.eps_dry, predictor_limiter);
      const double mass = (fx.hi.H * fx.hi.u - fx.lo.H * fx.lo.u) + (fy.hi.H * fy.hi.v - fy.lo.H * fy.lo.v);
      const double mx = (fx.hi.H * fx.hi.u * fx.hi.u - fx.lo.H * fx.lo.u * fx.lo.u) +
                        (fy.hi.H * fy.hi.v * fy.hi.u - fy.lo.H * fy.lo.v * fy.lo.u);
      const double my = (fx.hi.H * fx.hi.u * fx.hi.v - fx.lo.H * fx.lo.u * fx.lo.v) +
                        (fy.hi.H * fy.hi.v * fy.hi.v - fy.lo.H * fy.lo.v * fy.lo.v);

      const double sigma = std::max(part.HL[k], -cv.H / half);
      const double Hh = std::max(0.0, cv.H + half * (sigma - mass / h));
      part.Hh[k] = Hh;
      if (Hh <= p.eps_dry) {
        part.huh[k] = part.hvh[k] = 0.0;
      } else {
        const double qx = cv.hu + half * (part.huL[k] - mx / h);
        const double qy = cv.hv + half * (part.hvL[k] - my / h);
        const double fr = friction_factor(Hh, std::sqrt(qx * qx + qy * qy) / Hh, part.manning[k], p.g, half);
        part.huh[k] = qx * fr;
        part.hvh[k] = qy * fr;
      }
      const bool wet = cv.H > p.eps_dry;
      part.pdx[k] = wet ? half * (cv.hu / cv.H) : 0.0;
      part.pdy[k] = wet ? half * (cv.hv / cv.H) : 0.0;
      diag.max_disp_predictor = std::max({diag.max_disp_predictor, std::abs(part.pdx[k]), std::abs(part.pdy[k])});
    });
  });
}

/// K5: forces and source rates re-evaluated on the half-step state.
inline void k5_forces(Partition& part, const StageContext& c) {
  const PhysParams& p = *c.params;
  auto load = [&](std::size_t k) { return detail::half_at(part, k); };
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::lagrangian)) return;
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      if (detail::passive(part, k, p.eps_dry)) return;
      detail::cell_forces(part, p, p.limiter, c.grid->h, k, load);
    });
  });
}

/// K6: corrector. The Lagrangian state at t_{n+1} is U^n plus dt times the
/// midpoint forces; particles complete their path with the midpoint velocity.
inline void k6_corrector(Partition& part, const StageContext& c, StageDiagnostics& diag) {
  const PhysParams& p = *c.params;
  const double half = 0.5 * c.dt;
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::euler)) return;
    const bool lag = detail::block_active(c, bi, bj, detail::Activity::lagrangian);
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      if (!lag || detail::passive(part, k, p.eps_dry)) {
        part.HL[k] = part.H[k];
        part.huL[k] = part.hu[k];
        part.hvL[k] = part.hv[k];
        return;
      }
      const double sigma = std::max(part.HL[k], -part.H[k] / c.dt);
      part.HL[k] = part.H[k] + c.dt * sigma;
      part.huL[k] = part.hu[k] + c.dt * part.huL[k];
      part.hvL[k] = part.hv[k] + c.dt * part.hvL[k];
      const bool wet = part.Hh[k] > p.eps_dry;
      const double dx = wet ? half * (part.huh[k] / part.Hh[k]) : 0.0;
      const double dy = wet ? half * (part.hvh[k] / part.Hh[k]) : 0.0;
      part.pdx[k] += dx;
      part.pdy[k] += dy;
      diag.max_disp_corrector = std::max({diag.max_disp_corrector, std::abs(dx), std::abs(dy)});
    });
  });
}

/// K7: face fluxes of the partition's Euler-active blocks. Each block owns its
/// low-x and low-y faces; it also computes its high faces where no active
/// neighbour in this partition will. Faces towards an inactive block carry
/// nothing (both sides are dry) and are zeroed. Every cell is reconstructed
/// once per axis and shared by its two faces.
inline void k7_fluxes(Partition& part, const StageContext& c) {
  const SimGrid& g = *c.grid;
  const PhysParams& p = *c.params;
  const bool wall_w = c.sources->at(Edge::west) == BoundaryKind::wall;
  const bool wall_e = c.sources->at(Edge::east) == BoundaryKind::wall;
  const bool wall_s = c.sources->at(Edge::south) == BoundaryKind::wall;
  const bool wall_n = c.sources->at(Edge::north) == BoundaryKind::wall;
  thread_local std::vector<CellFaces> line, lower, upper;
  auto eul = [&](int bi, int bj) { return detail::block_active(c, bi, bj, detail::Activity::euler); };

  detail::for_blocks(part, g, [&](int bi, int bj) {
    if (!eul(bi, bj)) return;
    const int i0 = bi * g.block_w, i1 = std::min(i0 + g.block_w, g.nx);
    const int j0 = bj * g.block_h, j1 = std::min(j0 + g.block_h, part.row_end);
    const bool west_live = bi == 0 || eul(bi - 1, bj);
    const bool south_live = bj == 0 || eul(bi, bj - 1);
    const bool own_east = i1 == g.nx || !eul(bi + 1, bj);
    const bool east_live = i1 == g.nx || eul(bi + 1, bj);
    const bool own_north = j1 == part.row_end || !eul(bi, bj + 1);
    const bool north_live = j1 == g.ny || eul(bi, bj + 1);
    const int width = i1 - i0;

    // x faces i0 .. last_x; cell i is stored at line[i - i0 + 1].
    const int last_x = own_east ? i1 : i1 - 1;
    line.resize(static_cast<std::size_t>(width + 2));
    for (int j = j0; j < j1; ++j) {
      const int jl = j - part.row_begin;
      const int first_cell = west_live ? i0 - 1 : i0;
      const int last_cell = (own_east && east_live) ? i1 : i1 - 1;
      for (int i = first_cell; i <= last_cell; ++i)
        line[static_cast<std::size_t>(i - i0 + 1)] = detail::faces_x(part, p, part.at(i, jl));
      for (int i = i0; i <= last_x; ++i) {
        const std::size_t f = part.fxi(i, jl);
        if ((i == i0 && !west_live) || (i == i1 && !east_live)) {
          part.fx.zero(f);
          continue;
        }
        const bool wall = (i == 0 && wall_w) || (i == g.nx && wall_e);
        detail::store_flux(part.fx, f, part, c, line[static_cast<std::size_t>(i - i0)].hi,
                           line[static_cast<std::size_t>(i - i0 + 1)].lo, part.at(i - 1, jl), part.at(i, jl), Axis::x,
                           wall);
      }
    }

    // y faces j0 .. last_y, sweeping rows upwards with the previous row's
    // reconstruction kept in `lower`.
    const int last_y = own_north ? j1 : j1 - 1;
    lower.resize(static_cast<std::size_t>(width));
    upper.resize(static_cast<std::size_t>(width));
    if (south_live)
      for (int i = i0; i < i1; ++i)
        lower[static_cast<std::size_t>(i - i0)] = detail::faces_y(part, p, part.at(i, j0 - 1 - part.row_begin));
    for (int j = j0; j <= last_y; ++j) {
      const int jl = j - part.row_begin;
      const bool live = (j != j0 || south_live) && (j != j1 || north_live);
      if (j < j1 || north_live)
        for (int i = i0; i < i1; ++i) upper[static_cast<std::size_t>(i - i0)] = detail::faces_y(part, p, part.at(i, jl));
      const bool wall = (j == 0 && wall_s) || (j == g.ny && wall_n);
      for (int i = i0; i < i1; ++i) {
        const std::size_t f = part.fyi(i, jl);
        if (!live) {
          part.fy.zero(f);
          continue;
        }
        detail::store_flux(part.fy, f, part, c, lower[static_cast<std::size_t>(i - i0)].hi,
                           upper[static_cast<std::size_t>(i - i0)].lo, part.at(i, jl - 1), part.at(i, jl), Axis::y, wall);
      }
      std::swap(lower, upper);
    }
  });
}

/// K8: the particles' Lagrangian totals are remapped onto their cells and the
/// net face transfer is applied; then the Exner update, depth checks and
/// semi-implicit friction.
inline void k8_update(Partition& part, const StageContext& c, StageDiagnostics& diag) {
  const PhysParams& p = *c.params;
  const double h = c.grid->h;
  const double r = c.dt / h;
  const double porosity = 1.0 - p.psi;
  detail::for_blocks(part, *c.grid, [&](int bi, int bj) {
    if (!detail::block_active(c, bi, bj, detail::Activity::euler)) return;
    detail::for_cells(part, *c.grid, bi, bj, [&](int i, int jl) {
      const std::size_t k = part.at(i, jl);
      const std::size_t xw = part.fxi(i, jl), xe = part.fxi(i + 1, jl);
      const std::size_t ys = part.fyi(i, jl), yn = part.fyi(i, jl + 1);
      const auto& fx = part.fx;
      const auto& fy = part.fy;

      double H = part.HL[k] - r * ((fx.mass[xe] - fx.mass[xw]) + (fy.mass[yn] - fy.mass[ys]));
      double hu = part.huL[k] - r * ((fx.mn_minus[xe] - fx.mn_plus[xw]) + (fy.mt[yn] - fy.mt[ys]));
      double hv = part.hvL[k] - r * ((fx.mt[xe] - fx.mt[xw]) + (fy.mn_minus[yn] - fy.mn_plus[ys]));
      double b = part.b[k];
      if (p.transport_enabled()) b -= r * ((fx.sed[xe] - fx.sed[xw]) + (fy.sed[yn] - fy.sed[ys]));

      if (!(H >= -negative_depth_tolerance) || !std::isfinite(hu) || !std::isfinite(hv) || !std::isfinite(b))
        diag.flag(detail::global_index(part, i, jl), H);
      H = std::max(H, 0.0);

      if (H <= p.eps_dry) {
        hu = hv = 0.0;
      } else {
        if (c.closure && *c.closure) {
          const double v_k = p.c_sh > 0.0 ? shamov_threshold(p.d50, H, p.c_sh, p.eps_dry)
                                          : std::numeric_limits<double>::infinity();
          const BedExchange q = bed_exchange(CellSample{H, hu, hv, b, part.manning[k], v_k}, p, *c.closure);
          b += c.dt * (q.q_plus - q.q_minus) / porosity;
        }
        const double fr = friction_factor(H, std::sqrt(hu * hu + hv * hv) / H, part.manning[k], p.g, c.dt);
        hu *= fr;
        hv *= fr;
      }
      part.H[k] = H;
      part.hu[k] = hu;
      part.hv[k] = hv;
      part.b[k] = b;
      part.pdx[k] = part.pdy[k] = 0.0;
    });
  });
}

}  // namespace swsed::kernels
