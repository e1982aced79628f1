#pragma once

#include <algorithm>
#include <cmath>

#include "swsed/physics.hpp"
#include "swsed/reconstruct.hpp"

namespace swsed {

/// HLL flux of the transport terms through a face, in face-normal coordinates.
///
/// `mass`, `mom_n` and `mom_t` carry (H, H u_n, H u_t) advectively with the HLL
/// dissipation term; `pressure` is the HLL-weighted hydrostatic pressure g H^2 / 2
/// at the face, which the caller applies as a force.
struct FaceFlux {
  double mass = 0.0;
  double mom_n = 0.0;
  double mom_t = 0.0;
  double pressure = 0.0;
};

inline double normal_velocity(const FaceState& s, Axis axis) { return axis == Axis::x ? s.u : s.v; }
inline double tangential_velocity(const FaceState& s, Axis axis) { return axis == Axis::x ? s.v : s.u; }

/// Two-wave HLL solver. Wave speeds are S_L = min(u_L - c_L, u_R - c_R) and
/// S_R = max(u_L + c_L, u_R + c_R); against a dry side the wet side's dry-front
/// characteristic u +- 2c is used. Depths <= 0 count as dry.
inline FaceFlux hll_face_flux(const FaceState& l, const FaceState& r, double g, Axis axis = Axis::x) {
  const bool wet_l = l.H > 0.0, wet_r = r.H > 0.0;
  if (!wet_l && !wet_r) return {};
  const double hl = wet_l ? l.H : 0.0, hr = wet_r ? r.H : 0.0;
  const double unl = wet_l ? normal_velocity(l, axis) : 0.0;
  const double unr = wet_r ? normal_velocity(r, axis) : 0.0;
  const double utl = wet_l ? tangential_velocity(l, axis) : 0.0;
  const double utr = wet_r ? tangential_velocity(r, axis) : 0.0;
  const double cl = std::sqrt(g * hl), cr = std::sqrt(g * hr);

  double sl, sr;
  if (!wet_l) {
    sl = unr - 2.0 * cr;
    sr = unr + cr;
  } else if (!wet_r) {
    sl = unl - cl;
    sr = unl + 2.0 * cl;
  } else {
    sl = std::min(unl - cl, unr - cr);
    sr = std::max(unl + cl, unr + cr);
  }

  const double ql = hl * unl, qr = hr * unr;
  const double fl_mass = ql, fr_mass = qr;
  const double fl_n = ql * unl, fr_n = qr * unr;
  const double fl_t = ql * utl, fr_t = qr * utr;
  const double pl = 0.5 * g * hl * hl, pr = 0.5 * g * hr * hr;

  if (sl >= 0.0) return {fl_mass, fl_n, fl_t, pl};
  if (sr <= 0.0) return {fr_mass, fr_n, fr_t, pr};
  const double inv = 1.0 / (sr - sl);
  const double slsr = sl * sr;
  FaceFlux f;
  f.mass = (sr * fl_mass - sl * fr_mass + slsr * (hr - hl)) * inv;
  f.mom_n = (sr * fl_n - sl * fr_n + slsr * (qr - ql)) * inv;
  f.mom_t = (sr * fl_t - sl * fr_t + slsr * (hr * utr - hl * utl)) * inv;
  // Written as an increment so that equal side pressures give that pressure exactly.
  f.pressure = pl - sl * (pr - pl) * inv;
  return f;
}

/// Hydrostatic reconstruction of a face: both sides are re-expressed over the
/// common bed max(b_L, b_R), so a flat free surface yields equal depths.
struct HydrostaticPair {
  FaceState l;
  FaceState r;
};

inline HydrostaticPair hydrostatic_face(const FaceState& l, const FaceState& r) {
  const double bstar = std::max(l.b, r.b);
  HydrostaticPair out{l, r};
  out.l.H = std::max(0.0, l.eta - bstar);
  out.r.H = std::max(0.0, r.eta - bstar);
  out.l.b = out.r.b = bstar;
  return out;
}

/// Face sediment flux J_b,n / (1 - psi), upwinded on the sign of the mean
/// face-normal velocity. `dbdn` is the bed gradient across the face and
/// `n_l`, `n_r` the Manning coefficients of the two cells. A dry upwind side
/// carries no sediment.
inline double sediment_face_flux(const FaceState& l, const FaceState& r, const PhysParams& p, double dbdn,
                                 double n_l, double n_r, Axis axis = Axis::x) {
  const double un_mean = 0.5 * (normal_velocity(l, axis) + normal_velocity(r, axis));
  if (un_mean == 0.0) return 0.0;
  const FaceState& d = un_mean > 0.0 ? l : r;
  if (d.H <= 0.0) return 0.0;
  const double nm = un_mean > 0.0 ? n_l : n_r;
  const Vec2 grad = axis == Axis::x ? Vec2{dbdn, 0.0} : Vec2{0.0, dbdn};
  const BedloadFlux j = bedload_flux(p, d.H, Vec2{d.u, d.v}, nm, grad);
  return (axis == Axis::x ? j.jx : j.jy) / (1.0 - p.psi);
}

/// Everything the Euler stage needs from one face.
///
/// `mn_minus` is the normal momentum flux leaving the low-side cell and
/// `mn_plus` the one entering the high-side cell. They differ only by the
/// hydrostatic pressure correction over a bed step; with a flat bed they are equal.
struct InterfaceFlux {
  double mass = 0.0;
  double mn_minus = 0.0;
  double mn_plus = 0.0;
  double mt = 0.0;
  double sed = 0.0;
};

[[gnu::always_inline]] inline InterfaceFlux interface_flux(const FaceState& l, const FaceState& r, const PhysParams& p, double dbdn,
                                    double n_l, double n_r, Axis axis) {
  InterfaceFlux out;
  if (l.H <= 0.0 && r.H <= 0.0) return out;
  const HydrostaticPair hs = hydrostatic_face(l, r);
  const FaceFlux f = hll_face_flux(hs.l, hs.r, p.g, axis);
  const double dl = f.pressure - 0.5 * p.g * hs.l.H * hs.l.H;
  const double dr = f.pressure - 0.5 * p.g * hs.r.H * hs.r.H;
  out.mass = f.mass;
  out.mn_minus = f.mom_n + dl;
  out.mn_plus = f.mom_n + dr;
  out.mt = f.mom_t;
  if (p.transport_enabled()) out.sed = sediment_face_flux(hs.l, hs.r, p, dbdn, n_l, n_r, axis);
  return out;
}

}  // namespace swsed
