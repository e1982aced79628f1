#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "swsed/params.hpp"
#include "swsed/state.hpp"

namespace swsed {

enum class Axis { x, y };

[[gnu::always_inline]] inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

[[gnu::always_inline]] inline double superbee(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  const double s = a > 0.0 ? 1.0 : -1.0;
  const double aa = std::abs(a);
  const double ab = std::abs(b);
  return s * std::max(std::min(2.0 * aa, ab), std::min(aa, 2.0 * ab));
}

/// Monotonized-central limiter: the central slope unless it exceeds twice
/// either one-sided slope; zero at extrema.
[[gnu::always_inline]] inline double monotonized_central(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  const double c = 0.5 * (a + b);
  return a > 0.0 ? std::min({c, 2.0 * a, 2.0 * b}) : std::max({c, 2.0 * a, 2.0 * b});
}

[[gnu::always_inline]] inline double limited_slope(Limiter lim, double forward, double backward) {
  switch (lim) {
    case Limiter::minmod: return minmod(forward, backward);
    case Limiter::superbee: return superbee(forward, backward);
    case Limiter::monotonized_central: return monotonized_central(forward, backward);
  }
  return 0.0;
}

/// Conserved values of one cell.
struct CellValues {
  double H = 0.0;
  double hu = 0.0;
  double hv = 0.0;
  double b = 0.0;
};

/// Primitive state at one side of a face. `eta` is carried alongside b so that a
/// flat free surface reconstructs to bitwise equal values on both sides.
struct FaceState {
  double H = 0.0;
  double u = 0.0;
  double v = 0.0;
  double b = 0.0;
  double eta = 0.0;
};

/// Reconstructed values at the low (i - 1/2) and high (i + 1/2) faces of a cell,
/// together with the limited free-surface increment across the cell.
struct CellFaces {
  FaceState lo;
  FaceState hi;
  double eta_slope = 0.0;
};

/// Limited free-surface increment across a cell along one axis. Zero for a dry
/// cell or a cell with a dry neighbour; this is the same increment that
/// reconstruct_cell() uses.
[[gnu::always_inline]] inline double surface_slope(const CellValues& m, const CellValues& c, const CellValues& p, double eps_dry,
                            Limiter lim) {
  if (c.H <= eps_dry || m.H <= eps_dry || p.H <= eps_dry) return 0.0;
  const double etac = c.H + c.b;
  return limited_slope(lim, (p.H + p.b) - etac, etac - (m.H + m.b));
}

/// Piecewise-linear reconstruction of one cell from its two neighbours along an axis.
///
/// Limited slopes of eta = H + b, H, u and v are used and b is recovered as
/// eta - H. Dry cells reconstruct to zero depth and velocity at the bed; wet
/// cells next to a dry neighbour fall back to a constant state. When eta is
/// uniform the eta increment is exactly zero, which keeps the rest state balanced.
[[gnu::always_inline]] inline CellFaces reconstruct_cell(const CellValues& m, const CellValues& c, const CellValues& p,
                                  double eps_dry, Limiter lim) {
  CellFaces out;
  if (c.H <= eps_dry) {
    out.lo = out.hi = FaceState{0.0, 0.0, 0.0, c.b, c.b};
    return out;
  }
  const double uc = c.hu / c.H;
  const double vc = c.hv / c.H;
  const double etac = c.H + c.b;
  if (m.H <= eps_dry || p.H <= eps_dry) {
    out.lo = out.hi = FaceState{c.H, uc, vc, c.b, etac};
    return out;
  }
  const double um = m.hu / m.H, up = p.hu / p.H;
  const double vm = m.hv / m.H, vp = p.hv / p.H;
  const double s_eta = surface_slope(m, c, p, eps_dry, lim);
  const double s_h = limited_slope(lim, p.H - c.H, c.H - m.H);
  const double s_u = limited_slope(lim, up - uc, uc - um);
  const double s_v = limited_slope(lim, vp - vc, vc - vm);

  out.eta_slope = s_eta;
  out.hi.eta = etac + 0.5 * s_eta;
  out.lo.eta = etac - 0.5 * s_eta;
  out.hi.H = c.H + 0.5 * s_h;
  out.lo.H = c.H - 0.5 * s_h;
  out.hi.u = uc + 0.5 * s_u;
  out.lo.u = uc - 0.5 * s_u;
  out.hi.v = vc + 0.5 * s_v;
  out.lo.v = vc - 0.5 * s_v;
  out.hi.b = out.hi.eta - out.hi.H;
  out.lo.b = out.lo.eta - out.lo.H;
  return out;
}

/// Left/right states for every interior face along one axis.
/// For Axis::x, face (i, j) separates cells (i, j) and (i + 1, j) and the arrays
/// have (nx - 1) x ny entries; for Axis::y the layout is nx x (ny - 1).
/// Cells at the domain edge use a zero-gradient neighbour outside the grid.
struct FaceStates {
  Grid2D<FaceState> left;
  Grid2D<FaceState> right;
};

inline FaceStates reconstruct(const FlowState& s, Axis axis, double eps_dry = 1e-6,
                              Limiter lim = Limiter::minmod) {
  const int nx = s.nx(), ny = s.ny();
  auto cell = [&](int i, int j) {
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return CellValues{s.H(i, j), s.hu(i, j), s.hv(i, j), s.b(i, j)};
  };
  auto faces_of = [&](int i, int j) {
    if (axis == Axis::x) return reconstruct_cell(cell(i - 1, j), cell(i, j), cell(i + 1, j), eps_dry, lim);
    return reconstruct_cell(cell(i, j - 1), cell(i, j), cell(i, j + 1), eps_dry, lim);
  };
  const int fx = axis == Axis::x ? nx - 1 : nx;
  const int fy = axis == Axis::x ? ny : ny - 1;
  FaceStates out{Grid2D<FaceState>(fx, fy), Grid2D<FaceState>(fx, fy)};
  for (int j = 0; j < fy; ++j) {
    for (int i = 0; i < fx; ++i) {
      const int pi = axis == Axis::x ? i + 1 : i;
      const int pj = axis == Axis::x ? j : j + 1;
      out.left(i, j) = faces_of(i, j).hi;
      out.right(i, j) = faces_of(pi, pj).lo;
    }
  }
  return out;
}

}  // namespace swsed
