#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "swsed/errors.hpp"
#include "swsed/grid.hpp"

namespace swsed {

enum class AjMode { constant, depth_dependent };
enum class Limiter { minmod, superbee, monotonized_central };
enum class BoundaryKind { wall, open };

/// Domain edges, in the order used by SourceInputs::boundary.
enum class Edge { west = 0, east = 1, south = 2, north = 3 };

/// Physical and numerical parameters of a run.
struct PhysParams {
  double g = 9.81;
  double psi = 0.4;          ///< bed porosity
  CellField manning = 0.0;   ///< n_M, s m^-1/3
  CellField beta = 0.0;      ///< absorption coefficient, 1/s
  AjMode aj_mode = AjMode::constant;
  double aj = 0.0;           ///< Grass coefficient when aj_mode == constant
  double m_exp = 2.0;        ///< Grass exponent
  double c_j = 0.0;          ///< slope-correction constant
  double c_sh = 0.0;         ///< Shamov constant; 0 disables threshold gating
  double s_rel = 2.65;       ///< rho_s / rho
  double d50 = 1e-3;         ///< median grain size, m
  double f_c = 0.0;          ///< Coriolis parameter, 1/s
  double k_cfl = 0.45;       ///< Courant number
  double eps_dry = 1e-6;     ///< depth at or below which a cell is dry, m
  Limiter limiter = Limiter::minmod;

  bool transport_enabled() const { return aj_mode == AjMode::depth_dependent || aj != 0.0; }

  /// Throws ConfigError on out-of-range values. `check_courant = false` skips
  /// only the 0 < K < 1 bound, for deliberate stability experiments.
  void validate(bool check_courant = true) const {
    if (!(g > 0.0)) throw ConfigError("gravity must be positive");
    if (!(psi >= 0.0 && psi < 1.0)) throw ConfigError("porosity must satisfy 0 <= psi < 1");
    if (check_courant && !(k_cfl > 0.0 && k_cfl < 1.0)) throw ConfigError("Courant number must satisfy 0 < K < 1");
    if (!(m_exp >= 0.0)) throw ConfigError("Grass exponent must be non-negative");
    if (!(eps_dry > 0.0)) throw ConfigError("dry threshold must be positive");
    if (manning.min() < 0.0) throw ConfigError("Manning coefficient must be non-negative");
    if (beta.min() < 0.0) throw ConfigError("absorption coefficient must be non-negative");
    if (c_sh < 0.0) throw ConfigError("Shamov constant must be non-negative");
    if (c_sh > 0.0 && !(d50 > 0.0)) throw ConfigError("d50 must be positive");
    if (aj_mode == AjMode::depth_dependent) {
      if (!(d50 > 0.0)) throw ConfigError("d50 must be positive for depth-dependent A_J");
      if (!(s_rel > 1.0)) throw ConfigError("s_rel must exceed 1 for depth-dependent A_J");
    }
  }

  void validate_fields(const SimGrid& grid) const {
    if (!manning.is_uniform() && !manning.values.same_shape(grid.nx, grid.ny))
      throw ConfigError("Manning field dimensions do not match the grid");
    if (!beta.is_uniform() && !beta.values.same_shape(grid.nx, grid.ny))
      throw ConfigError("absorption field dimensions do not match the grid");
  }
};

/// Point inflow (rate > 0) or outflow (rate < 0), m^3/s.
struct PointSource {
  int i = 0;
  int j = 0;
  double rate = 0.0;
};

/// Water sources and boundary kinds.
struct SourceInputs {
  CellField rain = 0.0;  ///< m/s
  std::vector<PointSource> points;
  std::array<BoundaryKind, 4> boundary{BoundaryKind::wall, BoundaryKind::wall, BoundaryKind::wall,
                                       BoundaryKind::wall};

  BoundaryKind at(Edge e) const { return boundary[static_cast<int>(e)]; }
  bool closed() const {
    for (auto b : boundary)
      if (b != BoundaryKind::wall) return false;
    return true;
  }

  void validate(const SimGrid& grid) const {
    for (const auto& p : points) {
      if (p.i < 0 || p.i >= grid.nx || p.j < 0 || p.j >= grid.ny)
        throw ConfigError("point source at (" + std::to_string(p.i) + ", " + std::to_string(p.j) +
                          ") lies outside the grid");
    }
    if (!rain.is_uniform() && !rain.values.same_shape(grid.nx, grid.ny))
      throw ConfigError("rain field dimensions do not match the grid");
  }
};

inline std::string_view to_string(BoundaryKind b) { return b == BoundaryKind::wall ? "wall" : "open"; }
inline std::string_view to_string(AjMode m) { return m == AjMode::constant ? "constant" : "depth_dependent"; }
inline std::string_view to_string(Limiter l) {
  switch (l) {
    case Limiter::minmod: return "minmod";
    case Limiter::superbee: return "superbee";
    case Limiter::monotonized_central: return "monotonized_central";
  }
  return "?";
}

}  // namespace swsed
