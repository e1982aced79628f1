#pragma once

// Closure formulas for bedload transport, erosion onset, bed friction,
// Coriolis forcing and water sources. All functions are pure and act on
// local cell data only.

#include <cmath>
#include <functional>
#include <limits>

#include "swsed/errors.hpp"
#include "swsed/params.hpp"

namespace swsed {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::sqrt(x * x + y * y); }
  bool operator==(const Vec2&) const = default;
};

/// Solid transport discharge, m^2/s.
struct BedloadFlux {
  double jx = 0.0;
  double jy = 0.0;

  double norm() const { return std::sqrt(jx * jx + jy * jy); }
  bool operator==(const BedloadFlux&) const = default;
};

/// Deposition source and erosion drain of the bed, m/s. Both non-negative.
struct BedExchange {
  double q_plus = 0.0;
  double q_minus = 0.0;
};

/// Local cell values handed to a bed-exchange closure.
struct CellSample {
  double H = 0.0;
  double hu = 0.0;
  double hv = 0.0;
  double b = 0.0;
  double n_manning = 0.0;
  double v_k = std::numeric_limits<double>::infinity();
};

using BedExchangeClosure = std::function<BedExchange(const CellSample&, const PhysParams&)>;

/// Grass bedload formula J0 = A_J v |v|^m.
inline BedloadFlux grass_flux(Vec2 v, double aj, double m_exp) {
  const double speed = v.norm();
  if (speed == 0.0) return {};
  const double scale = aj * (m_exp == 2.0 ? speed * speed : std::pow(speed, m_exp));
  return {scale * v.x, scale * v.y};
}

/// Depth-dependent Grass coefficient A_J = 0.05 n_M^3 / ((s - 1) sqrt(g H) d50).
inline double aj_coefficient(double n_manning, double s_rel, double H, double d50, double g) {
  if (!(H > 0.0)) throw DomainError("aj_coefficient: depth must be positive");
  if (!(d50 > 0.0)) throw DomainError("aj_coefficient: d50 must be positive");
  if (!(s_rel > 1.0)) throw DomainError("aj_coefficient: s_rel must exceed 1");
  return 0.05 * n_manning * n_manning * n_manning / ((s_rel - 1.0) * std::sqrt(g * H) * d50);
}

/// Shamov critical velocity v_k = C_Sh d50^(1/3) H^(1/6). Dry cells never transport,
/// which is signalled by an infinite threshold.
inline double shamov_threshold(double d50, double H, double c_sh, double eps_dry = 1e-6) {
  if (H < eps_dry) return std::numeric_limits<double>::infinity();
  return c_sh * std::cbrt(d50) * std::pow(H, 1.0 / 6.0);
}

/// Slope correction J = J0 - C_J |J0| grad(b).
inline BedloadFlux slope_corrected_flux(BedloadFlux j0, Vec2 grad_b, double c_j) {
  const double corr = c_j * j0.norm();
  return {j0.jx - corr * grad_b.x, j0.jy - corr * grad_b.y};
}

/// Grass coefficient for a cell, honouring the configured mode.
inline double grass_coefficient(const PhysParams& p, double n_manning, double H) {
  if (p.aj_mode == AjMode::constant) return p.aj;
  if (H <= p.eps_dry) return 0.0;
  return aj_coefficient(n_manning, p.s_rel, H, p.d50, p.g);
}

/// Composed bedload flux: Grass flux, slope correction, then Shamov gating.
/// Below the critical velocity (or in a dry cell) the flux is exactly zero.
inline BedloadFlux bedload_flux(const PhysParams& p, double H, Vec2 v, double n_manning, Vec2 grad_b) {
  if (H <= p.eps_dry) return {};
  const double speed = v.norm();
  if (p.c_sh > 0.0 && speed < shamov_threshold(p.d50, H, p.c_sh, p.eps_dry)) return {};
  const BedloadFlux j0 = grass_flux(v, grass_coefficient(p, n_manning, H), p.m_exp);
  return slope_corrected_flux(j0, grad_b, p.c_j);
}

/// Bed exchange q+/q-. Without a closure the model is pure bedload and the
/// exchange vanishes; dry cells never exchange.
inline BedExchange bed_exchange(const CellSample& cell, const PhysParams& p,
                                const BedExchangeClosure& closure = {}) {
  if (cell.H <= p.eps_dry || !closure) return {};
  BedExchange q = closure(cell, p);
  if (!(q.q_plus >= 0.0) || !(q.q_minus >= 0.0))
    throw DomainError("bed exchange closure returned a negative or non-finite rate");
  return q;
}

/// Manning friction acceleration a_f = -g n^2 |v| v / H^(4/3).
inline Vec2 friction_slope(double H, double hu, double hv, double n_manning, double g) {
  if (!(H > 0.0) || n_manning == 0.0) return {};
  const Vec2 v{hu / H, hv / H};
  const double k = -g * n_manning * n_manning * v.norm() / std::pow(H, 4.0 / 3.0);
  return {k * v.x, k * v.y};
}

/// Semi-implicit friction factor 1 / (1 + dt g n^2 |v| / H^(4/3)); multiplying the
/// momentum by it can shrink but never reverse it.
inline double friction_factor(double H, double speed, double n_manning, double g, double dt) {
  if (!(H > 0.0) || n_manning == 0.0 || speed == 0.0) return 1.0;
  return 1.0 / (1.0 + dt * g * n_manning * n_manning * speed / std::pow(H, 4.0 / 3.0));
}

/// Coriolis acceleration f_c (v, -u).
inline Vec2 coriolis(Vec2 v, double f_c) { return {f_c * v.y, -f_c * v.x}; }

/// Net water source sigma = rain - beta H, bounded so that a step of length dt
/// cannot drive the depth negative.
inline double sigma_source(double H, double rain, double beta,
                           double dt = std::numeric_limits<double>::infinity()) {
  const double sigma = rain - beta * H;
  if (std::isfinite(dt) && dt > 0.0) return std::max(sigma, -H / dt);
  return sigma;
}

}  // namespace swsed
