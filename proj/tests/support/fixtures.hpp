#pragma once

// Setups shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "swsed.hpp"

namespace swsed::testing {

/// A 1D-like channel: nx cells along x, three rows, block rows of height 3.
inline SimGrid channel(int nx, double h = 1.0, int ny = 3) { return SimGrid{nx, ny, h, 16, 3}; }

/// Water at rest: depth hl for x < x0, hr elsewhere, over `bed`.
inline FlowState dam_break(const SimGrid& g, double x0, double hl, double hr, const Field& bed) {
  Field d(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) d(i, j) = g.x_center(i) < x0 ? hl : hr;
  return new_state(g, bed, DepthField{d});
}

inline FlowState dam_break(const SimGrid& g, double x0, double hl, double hr) {
  return dam_break(g, x0, hl, hr, Field(g.nx, g.ny, 0.0));
}

/// Smooth bed of Gaussian mounds, deterministic for a given seed.
inline Field mounds(const SimGrid& g, unsigned seed, int count, double height) {
  io::ScenarioConfig c;
  c.grid = g;
  c.bed.kind = io::BedKind::bumps;
  c.bed.seed = seed;
  c.bed.bump_count = count;
  c.bed.bump_height = height;
  c.bed.radius_min = 0.05 * g.nx * g.h;
  c.bed.radius_max = 0.2 * g.nx * g.h;
  return io::detail::make_bed(c, g);
}

/// Subcritical channel flow with unit discharge q and depth H0 away from a
/// cos^2 bed hump of height a centred at xc with half-width w.
inline FlowState hump_flow(const SimGrid& g, double q, double H0, double a, double xc, double w, double gravity = 9.81) {
  Field bed(g.nx, g.ny, 0.0), d(g.nx, g.ny, 0.0);
  const double energy = H0 + q * q / (2.0 * gravity * H0 * H0);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x_center(i);
    const double cs = std::abs(x - xc) < w ? std::cos(std::numbers::pi * (x - xc) / (2.0 * w)) : 0.0;
    const double bb = a * cs * cs;
    const double H = io::detail::subcritical_depth(q, energy, bb, gravity);
    for (int j = 0; j < g.ny; ++j) {
      bed(i, j) = bb;
      d(i, j) = H;
    }
  }
  FlowState s = new_state(g, bed, DepthField{d});
  for (std::size_t k = 0; k < s.hu.size(); ++k) s.hu[k] = q;
  return s;
}

inline SourceInputs open_channel() {
  SourceInputs src;
  src.boundary = {BoundaryKind::open, BoundaryKind::open, BoundaryKind::wall, BoundaryKind::wall};
  return src;
}

/// Values of row j.
inline std::vector<double> row(const Field& f, int j) {
  std::vector<double> out(static_cast<std::size_t>(f.nx()));
  for (int i = 0; i < f.nx(); ++i) out[static_cast<std::size_t>(i)] = f(i, j);
  return out;
}

/// Mean absolute difference between a coarse profile and the pairwise
/// averages of a profile twice as fine.
inline double coarse_fine_l1(const std::vector<double>& coarse, const std::vector<double>& fine) {
  double s = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) s += std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1]));
  return s / static_cast<double>(coarse.size());
}

inline double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace swsed::testing
