#pragma once

// Exact solutions of the 1D dam-break Riemann problem on a flat, frictionless
// bed with the water initially at rest: Ritter (dry downstream side) and
// Stoker (wet downstream side).

#include <cmath>

#include "swsed/errors.hpp"

namespace swsed::analytic {

struct DepthVelocity {
  double H = 0.0;
  double u = 0.0;
};

/// Ritter solution for depth h0 at x < x0 and a dry bed for x > x0.
class Ritter {
 public:
  Ritter(double h0, double x0, double g = 9.81) : h0_(h0), x0_(x0), g_(g), c0_(std::sqrt(g * h0)) {
    if (!(h0 > 0.0) || !(g > 0.0)) throw DomainError("Ritter: h0 and g must be positive");
  }

  DepthVelocity at(double x, double t) const {
    if (t <= 0.0) return {x < x0_ ? h0_ : 0.0, 0.0};
    const double xi = (x - x0_) / t;
    if (xi <= -c0_) return {h0_, 0.0};
    if (xi >= 2.0 * c0_) return {0.0, 0.0};
    const double c = (2.0 * c0_ - xi) / 3.0;
    return {c * c / g_, 2.0 * (xi + c0_) / 3.0};
  }
  double depth(double x, double t) const { return at(x, t).H; }
  /// Position of the wet/dry front at time t.
  double front(double t) const { return x0_ + 2.0 * c0_ * t; }
  double wave_speed() const { return c0_; }

 private:
  double h0_, x0_, g_, c0_;
};

/// Stoker solution for depth hl at x < x0 and hr (0 < hr < hl) for x > x0.
class Stoker {
 public:
  Stoker(double hl, double hr, double x0, double g = 9.81) : hl_(hl), hr_(hr), x0_(x0), g_(g) {
    if (!(hr > 0.0) || !(hl > hr) || !(g > 0.0)) throw DomainError("Stoker: need 0 < hr < hl and g > 0");
    cl_ = std::sqrt(g * hl);
    // Middle depth: the left rarefaction and the right shock give the same velocity.
    auto mismatch = [&](double hm) {
      const double u_rare = 2.0 * (cl_ - std::sqrt(g * hm));
      const double u_shock = (hm - hr) * std::sqrt(0.5 * g * (hm + hr) / (hm * hr));
      return u_rare - u_shock;
    };
    double lo = hr, hi = hl;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hl; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mismatch(mid) > 0.0 ? lo : hi) = mid;
    }
    hm_ = 0.5 * (lo + hi);
    cm_ = std::sqrt(g * hm_);
    um_ = 2.0 * (cl_ - cm_);
    shock_ = hm_ * um_ / (hm_ - hr_);
  }

  DepthVelocity at(double x, double t) const {
    if (t <= 0.0) return {x < x0_ ? hl_ : hr_, 0.0};
    const double xi = (x - x0_) / t;
    if (xi <= -cl_) return {hl_, 0.0};
    if (xi <= um_ - cm_) {
      const double c = (2.0 * cl_ - xi) / 3.0;
      return {c * c / g_, 2.0 * (xi + cl_) / 3.0};
    }
    if (xi < shock_) return {hm_, um_};
    return {hr_, 0.0};
  }
  double depth(double x, double t) const { return at(x, t).H; }
  double plateau_depth() const { return hm_; }
  double plateau_velocity() const { return um_; }
  double shock_speed() const { return shock_; }

 private:
  double hl_, hr_, x0_, g_;
  double cl_ = 0.0, hm_ = 0.0, cm_ = 0.0, um_ = 0.0, shock_ = 0.0;
};

}  // namespace swsed::analytic
