#pragma once

// Per-block wet-cell accounting. A block whose count is zero holds no water and
// no source and can be skipped by the Lagrangian stage; the Euler stage also
// needs the edge-adjacent blocks because water may cross into them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "swsed/grid.hpp"
#include "swsed/params.hpp"
#include "swsed/state.hpp"

namespace swsed {

struct ActiveBlockMap {
  int nbx = 0;
  int nby = 0;
  std::vector<int> counts;

  ActiveBlockMap() = default;
  ActiveBlockMap(int nbx_, int nby_) : nbx(nbx_), nby(nby_), counts(static_cast<std::size_t>(nbx_) * nby_, 0) {}
  explicit ActiveBlockMap(const SimGrid& g) : ActiveBlockMap(g.nbx(), g.nby()) {}

  std::size_t size() const { return counts.size(); }
  int block(int bi, int bj) const { return bj * nbx + bi; }
  int count(int bi, int bj) const { return counts[static_cast<std::size_t>(block(bi, bj))]; }

  std::size_t lagrangian_active_blocks() const;
  std::size_t euler_active_blocks() const;
};

/// Lagrangian activity: the block itself holds water or a source.
inline bool lagrangian_active(const ActiveBlockMap& map, int k) { return map.counts[static_cast<std::size_t>(k)] > 0; }

/// Euler activity: the block or one of its four edge neighbours holds water or a
/// source. Neighbour indices are clamped to the map.
inline bool euler_active(const ActiveBlockMap& map, int k) {
  const int bi = k % map.nbx, bj = k / map.nbx;
  const int left = std::max(bi - 1, 0), right = std::min(bi + 1, map.nbx - 1);
  const int below = std::max(bj - 1, 0), above = std::min(bj + 1, map.nby - 1);
  return map.count(bi, bj) > 0 || map.count(left, bj) > 0 || map.count(right, bj) > 0 ||
         map.count(bi, below) > 0 || map.count(bi, above) > 0;
}

inline std::size_t ActiveBlockMap::lagrangian_active_blocks() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
}

inline std::size_t ActiveBlockMap::euler_active_blocks() const {
  std::size_t n = 0;
  for (int k = 0; k < static_cast<int>(counts.size()); ++k) n += euler_active(*this, k) ? 1 : 0;
  return n;
}

/// In-place pairwise tree sum of per-cell activity flags, halving the stride at
/// each level like a shared-memory block reduction. `flags` is clobbered.
inline int tree_sum(std::vector<int>& flags) {
  std::size_t n = 1;
  while (n < flags.size()) n <<= 1;
  flags.resize(n, 0);
  for (std::size_t k = n / 2; k != 0; k /= 2)
    for (std::size_t t = 0; t < k; ++t) flags[t] += flags[t + k];
  return flags.empty() ? 0 : flags[0];
}

/// Mask of cells that carry a water source (point source or positive rain).
inline Grid2D<std::uint8_t> source_mask(const SimGrid& grid, const SourceInputs& src) {
  Grid2D<std::uint8_t> mask(grid.nx, grid.ny, 0);
  for (const auto& p : src.points)
    if (p.rate != 0.0) mask(p.i, p.j) = 1;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (src.rain(i, j) > 0.0) mask(i, j) = 1;
  return mask;
}

/// Count of wet or source cells in block (bi, bj).
template <class DepthAt, class SourceAt>
int count_block(const SimGrid& grid, int bi, int bj, double eps_dry, DepthAt&& depth, SourceAt&& source,
                std::vector<int>& scratch) {
  const int i0 = bi * grid.block_w, i1 = std::min(i0 + grid.block_w, grid.nx);
  const int j0 = bj * grid.block_h, j1 = std::min(j0 + grid.block_h, grid.ny);
  scratch.assign(static_cast<std::size_t>(grid.block_w) * grid.block_h, 0);
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i)
      scratch[static_cast<std::size_t>(j - j0) * grid.block_w + (i - i0)] =
          (depth(i, j) > eps_dry || source(i, j)) ? 1 : 0;
  return tree_sum(scratch);
}

/// Recomputes the per-block counts of cells with H > eps_dry or an active source.
inline ActiveBlockMap update_counts(const FlowState& state, const SourceInputs& sources, const SimGrid& grid,
                                    double eps_dry = 1e-6) {
  ActiveBlockMap map(grid);
  const auto mask = source_mask(grid, sources);
  std::vector<int> scratch;
  for (int bj = 0; bj < map.nby; ++bj)
    for (int bi = 0; bi < map.nbx; ++bi)
      map.counts[static_cast<std::size_t>(map.block(bi, bj))] = count_block(
          grid, bi, bj, eps_dry, [&](int i, int j) { return state.H(i, j); },
          [&](int i, int j) { return mask(i, j) != 0; }, scratch);
  return map;
}

}  // namespace swsed
