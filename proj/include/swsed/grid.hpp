#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "swsed/errors.hpp"

namespace swsed {

/// Uniform Cartesian grid of square cells, tiled into blocks for activity tracking.
///
/// Cell (i, j) has its center at (origin_x + (i + 0.5) h, origin_y + (j + 0.5) h);
/// j grows northwards. When nx (ny) is not a multiple of block_w (block_h) the
/// last block column (row) is partial, which is equivalent to padding the grid
/// with inactive margin cells.
struct SimGrid {
  int nx = 0;
  int ny = 0;
  double h = 1.0;
  int block_w = 16;
  int block_h = 16;
  double origin_x = 0.0;
  double origin_y = 0.0;

  int nbx() const { return (nx + block_w - 1) / block_w; }
  int nby() const { return (ny + block_h - 1) / block_h; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t blocks() const { return static_cast<std::size_t>(nbx()) * static_cast<std::size_t>(nby()); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double x_center(int i) const { return origin_x + (i + 0.5) * h; }
  double y_center(int j) const { return origin_y + (j + 0.5) * h; }

  void validate() const {
    if (nx < 3 || ny < 3) throw ConfigError("grid needs at least 3x3 cells");
    if (!(h > 0.0)) throw ConfigError("cell size must be positive");
    if (block_w < 2 || block_h < 2) throw ConfigError("block dimensions must be at least 2");
  }

  bool operator==(const SimGrid&) const = default;
};

/// Dense row-major 2D array addressed by logical cell indices (i, j).
template <class T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int nx, int ny, T value = T{})
      : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }
  bool same_shape(int nx, int ny) const { return nx_ == nx && ny_ == ny; }

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<T> data_;
};

using Field = Grid2D<double>;

/// A per-cell coefficient that is either uniform or given cell by cell.
struct CellField {
  double uniform = 0.0;
  Field values;

  CellField() = default;
  CellField(double v) : uniform(v) {}  // NOLINT(google-explicit-constructor)
  CellField(Field f) : values(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  double operator()(int i, int j) const { return values.empty() ? uniform : values(i, j); }
  bool is_uniform() const { return values.empty(); }
  double max() const {
    if (values.empty()) return uniform;
    return *std::max_element(values.values().begin(), values.values().end());
  }
  double min() const {
    if (values.empty()) return uniform;
    return *std::min_element(values.values().begin(), values.values().end());
  }
};

}  // namespace swsed
