#pragma once

#include <algorithm>
#include <cmath>
#include <variant>

#include "swsed/errors.hpp"
#include "swsed/grid.hpp"

namespace swsed {

/// Conserved variables (H, Hu, Hv) and bed elevation b per cell.
struct FlowState {
  Field H;
  Field hu;
  Field hv;
  Field b;

  int nx() const { return H.nx(); }
  int ny() const { return H.ny(); }

  bool operator==(const FlowState&) const = default;
};

/// Initial free surface elevation, constant over the domain.
struct ConstantSurface {
  double eta0 = 0.0;
};

/// Initial water depth given cell by cell.
struct DepthField {
  Field depth;
};

using InitialDepth = std::variant<ConstantSurface, DepthField>;

/// Builds a state at rest over `bed`. Depth is clamped to be non-negative.
inline FlowState new_state(const SimGrid& grid, const Field& bed, const InitialDepth& init) {
  if (!bed.same_shape(grid.nx, grid.ny)) throw ConfigError("bed dimensions do not match the grid");
  FlowState s{Field(grid.nx, grid.ny), Field(grid.nx, grid.ny), Field(grid.nx, grid.ny), bed};
  if (const auto* cs = std::get_if<ConstantSurface>(&init)) {
    for (std::size_t k = 0; k < bed.size(); ++k) s.H[k] = std::max(0.0, cs->eta0 - bed[k]);
  } else {
    const auto& d = std::get<DepthField>(init).depth;
    if (!d.same_shape(grid.nx, grid.ny)) throw ConfigError("depth field dimensions do not match the grid");
    for (std::size_t k = 0; k < d.size(); ++k) s.H[k] = std::max(0.0, d[k]);
  }
  return s;
}

/// Sum of H h^2 over all cells, accumulated in global cell order.
inline double water_volume(const FlowState& s, double h) {
  double sum = 0.0;
  for (double v : s.H.values()) sum += v;
  return sum * h * h;
}

/// Sum of b h^2 over all cells, accumulated in global cell order.
inline double bed_volume(const FlowState& s, double h) {
  double sum = 0.0;
  for (double v : s.b.values()) sum += v;
  return sum * h * h;
}

/// Largest velocity magnitude over cells deeper than eps_dry.
inline double max_speed(const FlowState& s, double eps_dry) {
  double vmax = 0.0;
  for (std::size_t k = 0; k < s.H.size(); ++k) {
    if (s.H[k] > eps_dry) vmax = std::max(vmax, std::sqrt(s.hu[k] * s.hu[k] + s.hv[k] * s.hv[k]) / s.H[k]);
  }
  return vmax;
}

inline bool all_finite(const FlowState& s) {
  for (const Field* f : {&s.H, &s.hu, &s.hv, &s.b})
    for (double v : f->values())
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace swsed
