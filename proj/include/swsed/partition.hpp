#pragma once

// Row-band domain decomposition. Each partition owns a band of block rows and
// stores every cell field with two ghost/halo cells on each side, so stencils
// of radius two never leave local memory.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "swsed/grid.hpp"
#include "swsed/params.hpp"
#include "swsed/state.hpp"

namespace swsed {

/// Struct-of-arrays face data: one entry per face.
struct FaceArrays {
  std::vector<double> mass, mn_minus, mn_plus, mt, sed;

  void resize(std::size_t n) {
    for (auto* v : {&mass, &mn_minus, &mn_plus, &mt, &sed}) v->assign(n, 0.0);
  }
  void zero(std::size_t k) { mass[k] = mn_minus[k] = mn_plus[k] = mt[k] = sed[k] = 0.0; }
};

/// Which cell fields a halo exchange or ghost fill acts on.
enum class FieldSet { state, half };

struct Partition {
  static constexpr int halo = 2;

  int id = 0;
  int nx = 0;
  int block_row_begin = 0, block_row_end = 0;
  int row_begin = 0, row_end = 0;  ///< owned global rows [row_begin, row_end)

  // Conserved state at t_n (b is frozen during a step).
  std::vector<double> H, hu, hv, b;
  // Predictor state at t_{n+1/2}.
  std::vector<double> Hh, huh, hvh;
  // Lagrangian rates (K2/K5), then the Lagrangian full-step state (K6).
  std::vector<double> HL, huL, hvL;
  // Particle displacement relative to the cell center.
  std::vector<double> pdx, pdy;
  // Static inputs, including ghost and halo cells.
  std::vector<double> manning, beta, source_rate;
  std::vector<std::uint8_t> source;

  FaceArrays fx;  ///< (nx + 1) x rows, face i is the low-x face of cell i
  FaceArrays fy;  ///< nx x (rows + 1), face jl is the low-y face of local row jl

  int rows() const { return row_end - row_begin; }
  int stride() const { return nx + 2 * halo; }
  /// Padded index of global column i and local row jl (both may reach into ghosts).
  std::size_t at(int i, int jl) const {
    return static_cast<std::size_t>(jl + halo) * static_cast<std::size_t>(stride()) +
           static_cast<std::size_t>(i + halo);
  }
  std::size_t fxi(int i, int jl) const { return static_cast<std::size_t>(jl) * (nx + 1) + i; }
  std::size_t fyi(int i, int jl) const { return static_cast<std::size_t>(jl) * nx + i; }

  std::vector<std::vector<double>*> fields(FieldSet set) {
    if (set == FieldSet::state) return {&H, &hu, &hv, &b};
    return {&Hh, &huh, &hvh, &b};
  }
  std::vector<const std::vector<double>*> fields(FieldSet set) const {
    if (set == FieldSet::state) return {&H, &hu, &hv, &b};
    return {&Hh, &huh, &hvh, &b};
  }

  void allocate() {
    const std::size_t n = static_cast<std::size_t>(stride()) * (rows() + 2 * halo);
    for (auto* v : {&H, &hu, &hv, &b, &Hh, &huh, &hvh, &HL, &huL, &hvL, &pdx, &pdy, &manning, &beta, &source_rate})
      v->assign(n, 0.0);
    source.assign(n, 0);
    fx.resize(static_cast<std::size_t>(nx + 1) * rows());
    fy.resize(static_cast<std::size_t>(nx) * (rows() + 1));
  }
};

/// Ring neighbours of a worker as (bottom, top). The ring wraps at both ends so
/// every device has two peers; halos at the physical domain edges are taken
/// from boundary conditions rather than from the wrapped peer.
inline std::pair<int, int> ring_neighbors(int id, int count) {
  if (count <= 1) return {0, 0};
  if (id == 0) return {count - 1, 1};
  if (id == count - 1) return {id - 1, 0};
  return {id - 1, id + 1};
}

/// Splits the block rows of `grid` into at most `workers` contiguous bands,
/// each owning at least two cell rows.
inline std::vector<Partition> make_partitions(const SimGrid& grid, int workers) {
  const int nby = grid.nby();
  int w = std::clamp(workers, 1, nby);
  auto band_rows = [&](int count, int p) {
    const int br0 = static_cast<int>(static_cast<long long>(p) * nby / count);
    const int br1 = static_cast<int>(static_cast<long long>(p + 1) * nby / count);
    return std::min(grid.ny, br1 * grid.block_h) - br0 * grid.block_h;
  };
  while (w > 1) {
    bool ok = true;
    for (int p = 0; p < w; ++p) ok = ok && band_rows(w, p) >= Partition::halo;
    if (ok) break;
    --w;
  }
  std::vector<Partition> parts(static_cast<std::size_t>(w));
  for (int p = 0; p < w; ++p) {
    auto& part = parts[static_cast<std::size_t>(p)];
    part.id = p;
    part.nx = grid.nx;
    part.block_row_begin = static_cast<int>(static_cast<long long>(p) * nby / w);
    part.block_row_end = static_cast<int>(static_cast<long long>(p + 1) * nby / w);
    part.row_begin = part.block_row_begin * grid.block_h;
    part.row_end = std::min(grid.ny, part.block_row_end * grid.block_h);
    part.allocate();
  }
  return parts;
}

/// Copies the neighbours' owned boundary rows into this partition's halo rows.
/// Either neighbour may be null at the physical domain edge.
inline void pull_halos(Partition& self, const Partition* below, const Partition* above, FieldSet set) {
  const int h = Partition::halo;
  const std::size_t w = static_cast<std::size_t>(self.stride());
  auto mine = self.fields(set);
  if (below) {
    auto theirs = below->fields(set);
    for (std::size_t f = 0; f < mine.size(); ++f)
      for (int r = 0; r < h; ++r)
        std::copy_n(theirs[f]->begin() + static_cast<std::ptrdiff_t>(below->at(-h, below->rows() - h + r)), w,
                    mine[f]->begin() + static_cast<std::ptrdiff_t>(self.at(-h, -h + r)));
  }
  if (above) {
    auto theirs = above->fields(set);
    for (std::size_t f = 0; f < mine.size(); ++f)
      for (int r = 0; r < h; ++r)
        std::copy_n(theirs[f]->begin() + static_cast<std::ptrdiff_t>(above->at(-h, r)), w,
                    mine[f]->begin() + static_cast<std::ptrdiff_t>(self.at(-h, self.rows() + r)));
  }
}

/// Exchanges halo rows between all adjacent partitions, both directions.
inline void exchange_halos(std::vector<Partition>& parts, FieldSet set = FieldSet::state) {
  const int n = static_cast<int>(parts.size());
  for (int p = 0; p < n; ++p) {
    const auto [bottom, top] = ring_neighbors(p, n);
    const Partition* below = p > 0 ? &parts[static_cast<std::size_t>(bottom)] : nullptr;
    const Partition* above = p < n - 1 ? &parts[static_cast<std::size_t>(top)] : nullptr;
    pull_halos(parts[static_cast<std::size_t>(p)], below, above, set);
  }
}

/// Fills the ghost columns of the owned rows. Walls mirror the state and flip
/// the normal momentum; open edges extrapolate with zero gradient.
inline void fill_ghost_columns(Partition& part, const SimGrid& grid, const SourceInputs& src, FieldSet set) {
  const int h = Partition::halo;
  auto f = part.fields(set);  // depth, x-momentum, y-momentum, bed
  const bool west_wall = src.at(Edge::west) == BoundaryKind::wall;
  const bool east_wall = src.at(Edge::east) == BoundaryKind::wall;
  const int nx = grid.nx;
  for (int jl = 0; jl < part.rows(); ++jl) {
    for (int g = 1; g <= h; ++g) {
      const int wi = west_wall ? g - 1 : 0;
      const int ei = east_wall ? nx - g : nx - 1;
      for (std::size_t q = 0; q < f.size(); ++q) {
        auto& v = *f[q];
        const double w = v[part.at(wi, jl)], e = v[part.at(ei, jl)];
        v[part.at(-g, jl)] = (q == 1 && west_wall) ? -w : w;
        v[part.at(nx - 1 + g, jl)] = (q == 1 && east_wall) ? -e : e;
      }
    }
  }
}

/// Fills the ghost rows below the south edge and above the north edge of the
/// domain, if this partition touches them. Ghost columns must be filled first.
inline void fill_ghost_rows(Partition& part, const SimGrid& grid, const SourceInputs& src, FieldSet set) {
  const int h = Partition::halo;
  auto f = part.fields(set);
  auto fill = [&](bool south) {
    const bool wall = src.at(south ? Edge::south : Edge::north) == BoundaryKind::wall;
    const int last = part.rows() - 1;
    for (int g = 1; g <= h; ++g) {
      const int dst = south ? -g : last + g;
      const int from = wall ? (south ? g - 1 : last - g + 1) : (south ? 0 : last);
      for (std::size_t q = 0; q < f.size(); ++q) {
        const bool flip = q == 2 && wall;
        auto& v = *f[q];
        for (int i = -h; i < grid.nx + h; ++i) {
          const double x = v[part.at(i, from)];
          v[part.at(i, dst)] = flip ? -x : x;
        }
      }
    }
  };
  if (part.row_begin == 0) fill(true);
  if (part.row_end == grid.ny) fill(false);
}

inline void fill_ghosts(Partition& part, const SimGrid& grid, const SourceInputs& src, FieldSet set) {
  fill_ghost_columns(part, grid, src, set);
  fill_ghost_rows(part, grid, src, set);
}

}  // namespace swsed
