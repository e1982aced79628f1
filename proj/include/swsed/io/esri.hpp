#pragma once

// ESRI ASCII grid ("arc/info ascii") reader and writer.
//
//   ncols         4
//   nrows         3
//   xllcorner     0.0
//   yllcorner     0.0
//   cellsize      1.0
//   NODATA_value  -9999
//   <nrows lines of ncols values, northernmost row first>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "swsed/errors.hpp"
#include "swsed/grid.hpp"

namespace swsed::io {

struct DemOptions {
  /// Elevation given to NODATA cells. Unset means the highest valid
  /// elevation plus `wall_margin`.
  std::optional<double> nodata_fill;
  double wall_margin = 100.0;
  int block_w = 16;
  int block_h = 16;
};

struct Dem {
  SimGrid grid;
  Field bed;
  std::optional<double> nodata_value;
  std::size_t nodata_cells = 0;
  double fill_elevation = 0.0;  ///< elevation written into NODATA cells
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == ',')) ++k;
    const std::size_t start = k;
    while (k < s.size() && s[k] != ' ' && s[k] != '\t' && s[k] != ',') ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

inline std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

/// Line reader that strips a trailing CR so CRLF and LF files parse alike.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace detail

/// Parses a DEM from a stream. Row r of the file becomes grid row nrows - 1 - r,
/// so the first data line is the northern edge.
inline Dem parse_dem(std::istream& in, const DemOptions& opt = {}) {
  using detail::iequals;
  detail::LineReader reader(in);
  std::string line;

  std::optional<double> ncols, nrows, xll, yll, cellsize, nodata;
  std::optional<double> dx, dy;
  bool data_started = false;
  std::vector<double> values;
  std::vector<bool> missing;
  int rows_read = 0;
  int nc = 0, nr = 0;
  Dem dem;

  auto header_int = [&](const std::optional<double>& v, std::string_view name) {
    if (!v) throw ParseError(reader.number(), "missing header token " + std::string(name));
    if (*v != std::floor(*v) || *v < 1.0 || *v > static_cast<double>(std::numeric_limits<int>::max()))
      throw ParseError(reader.number(), std::string(name) + " must be a positive integer");
    return static_cast<int>(*v);
  };

  auto finish_header = [&] {
    nc = header_int(ncols, "ncols");
    nr = header_int(nrows, "nrows");
    if (!xll) throw ParseError(reader.number(), "missing header token xllcorner");
    if (!yll) throw ParseError(reader.number(), "missing header token yllcorner");
    if (!cellsize) {
      if (dx && dy) {
        if (*dx != *dy) throw ParseError(reader.number(), "cells are not square (dx != dy)");
        cellsize = dx;
      } else {
        throw ParseError(reader.number(), "missing header token cellsize");
      }
    }
    if (!(*cellsize > 0.0)) throw ParseError(reader.number(), "cellsize must be positive");
    values.reserve(static_cast<std::size_t>(nc) * static_cast<std::size_t>(nr));
    missing.reserve(values.capacity());
  };

  while (reader.next(line)) {
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    const auto tokens = detail::split_ws(text);

    if (!data_started) {
      const std::string_view key = tokens[0];
      const bool is_header = std::isalpha(static_cast<unsigned char>(key[0])) != 0;
      if (is_header) {
        if (iequals(key, "cellsize") && tokens.size() == 3) {
          const auto a = detail::to_double(tokens[1]), b = detail::to_double(tokens[2]);
          if (a && b && *a != *b) throw ParseError(reader.number(), "cells are not square");
        }
        if (tokens.size() < 2) throw ParseError(reader.number(), "header token " + std::string(key) + " has no value");
        if (tokens.size() > 2 && !iequals(key, "cellsize"))
          throw ParseError(reader.number(), "header token " + std::string(key) + " has extra values");
        const auto v = detail::to_double(tokens[1]);
        if (!v) throw ParseError(reader.number(), "bad value for " + std::string(key));
        if (iequals(key, "ncols")) ncols = v;
        else if (iequals(key, "nrows")) nrows = v;
        else if (iequals(key, "xllcorner")) xll = v;
        else if (iequals(key, "yllcorner")) yll = v;
        else if (iequals(key, "cellsize")) cellsize = v;
        else if (iequals(key, "NODATA_value")) nodata = v;
        else if (iequals(key, "dx")) dx = v;
        else if (iequals(key, "dy")) dy = v;
        else throw ParseError(reader.number(), "unknown header token " + std::string(key));
        continue;
      }
      finish_header();
      data_started = true;
    }

    if (rows_read == nr) throw ParseError(reader.number(), "more than nrows = " + std::to_string(nr) + " data rows");
    if (static_cast<int>(tokens.size()) != nc)
      throw ParseError(reader.number(), "row has " + std::to_string(tokens.size()) + " values, expected ncols = " +
                                            std::to_string(nc));
    for (const auto tok : tokens) {
      const auto v = detail::to_double(tok);
      if (!v || std::isnan(*v)) throw ParseError(reader.number(), "bad elevation value '" + std::string(tok) + "'");
      const bool is_nodata = nodata && *v == *nodata;
      if (!is_nodata && !std::isfinite(*v))
        throw ParseError(reader.number(), "bad elevation value '" + std::string(tok) + "'");
      values.push_back(*v);
      missing.push_back(is_nodata);
    }
    ++rows_read;
  }
  if (!data_started) {
    finish_header();
  }
  if (rows_read != nr)
    throw ParseError(reader.number(), "expected nrows = " + std::to_string(nr) + " data rows, found " +
                                          std::to_string(rows_read));

  dem.grid.nx = nc;
  dem.grid.ny = nr;
  dem.grid.h = *cellsize;
  dem.grid.origin_x = *xll;
  dem.grid.origin_y = *yll;
  dem.grid.block_w = opt.block_w;
  dem.grid.block_h = opt.block_h;
  dem.nodata_value = nodata;

  double bed_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!missing[k]) bed_max = std::max(bed_max, values[k]);
  dem.nodata_cells = static_cast<std::size_t>(std::count(missing.begin(), missing.end(), true));
  if (opt.nodata_fill) {
    dem.fill_elevation = *opt.nodata_fill;
  } else if (dem.nodata_cells > 0) {
    if (dem.nodata_cells == values.size()) throw ParseError(reader.number(), "every cell is NODATA");
    dem.fill_elevation = bed_max + opt.wall_margin;
  }

  dem.bed = Field(nc, nr);
  for (int r = 0; r < nr; ++r) {
    for (int i = 0; i < nc; ++i) {
      const std::size_t k = static_cast<std::size_t>(r) * static_cast<std::size_t>(nc) + static_cast<std::size_t>(i);
      dem.bed(i, nr - 1 - r) = missing[k] ? dem.fill_elevation : values[k];
    }
  }
  return dem;
}

inline Dem parse_dem(std::string_view text, const DemOptions& opt = {}) {
  std::istringstream in{std::string(text)};
  return parse_dem(in, opt);
}

inline Dem read_dem(const std::filesystem::path& path, const DemOptions& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open DEM file " + path.string());
  return parse_dem(in, opt);
}

/// Writes `bed` in ESRI ASCII grid form with full round-trip precision.
inline void write_dem(std::ostream& os, const SimGrid& grid, const Field& bed,
                      std::optional<double> nodata_value = std::nullopt) {
  if (!bed.same_shape(grid.nx, grid.ny)) throw ConfigError("bed dimensions do not match the grid");
  os << std::setprecision(17);
  os << "ncols         " << grid.nx << '\n'
     << "nrows         " << grid.ny << '\n'
     << "xllcorner     " << grid.origin_x << '\n'
     << "yllcorner     " << grid.origin_y << '\n'
     << "cellsize      " << grid.h << '\n';
  if (nodata_value) os << "NODATA_value  " << *nodata_value << '\n';
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) os << (i ? " " : "") << bed(i, j);
    os << '\n';
  }
}

inline void write_dem(const std::filesystem::path& path, const SimGrid& grid, const Field& bed,
                      std::optional<double> nodata_value = std::nullopt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write DEM file " + path.string());
  write_dem(os, grid, bed, nodata_value);
}

}  // namespace swsed::io
