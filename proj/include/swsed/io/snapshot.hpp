#pragma once

// Binary snapshot of a flow state.
//
// Layout, all integers and doubles little-endian:
//   char[8]   magic "SWSEDSNP"
//   uint32    format version
//   int32     nx, ny, block_w, block_h
//   double    h, origin_x, origin_y, time
//   int64     step
//   uint32    field count, then per field: uint8 name length + name bytes
//   double    nx * ny values per field, row-major with j (north) slowest
//
// hu and hv are stored alongside the derived u, v and eta so that the
// conserved state round-trips bit for bit.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "swsed/errors.hpp"
#include "swsed/grid.hpp"
#include "swsed/state.hpp"

namespace swsed::io {

/// Malformed or truncated snapshot data.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::array<char, 8> snapshot_magic{'S', 'W', 'S', 'E', 'D', 'S', 'N', 'P'};
inline constexpr std::uint32_t snapshot_version = 1;

struct Snapshot {
  SimGrid grid;
  double time = 0.0;
  std::int64_t step = 0;
  FlowState state;

  bool operator==(const Snapshot&) const = default;
};

/// Fields written to every snapshot, in file order.
inline const std::vector<std::string>& snapshot_fields() {
  static const std::vector<std::string> names{"H", "hu", "hv", "b", "u", "v", "eta"};
  return names;
}

namespace detail {

template <class T>
void put(std::ostream& os, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t k = 0; k < sizeof(U); ++k) bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xffu);
  os.write(bytes, sizeof(U));
}

template <class T>
T get(std::istream& in, const char* what) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U)))
    throw FormatError(std::string("snapshot truncated while reading ") + what);
  U bits = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) bits |= static_cast<U>(bytes[k]) << (8 * k);
  return std::bit_cast<T>(bits);
}

inline double velocity(double q, double H, double eps) { return H > eps ? q / H : 0.0; }

}  // namespace detail

/// Writes a snapshot. `eps_dry` only affects the derived velocity fields.
inline void write_snapshot(std::ostream& os, const Snapshot& s, double eps_dry = 1e-6) {
  const SimGrid& g = s.grid;
  const FlowState& st = s.state;
  if (!st.H.same_shape(g.nx, g.ny) || !st.hu.same_shape(g.nx, g.ny) || !st.hv.same_shape(g.nx, g.ny) ||
      !st.b.same_shape(g.nx, g.ny))
    throw ConfigError("snapshot state does not match its grid");
  os.write(snapshot_magic.data(), snapshot_magic.size());
  detail::put<std::uint32_t>(os, snapshot_version);
  detail::put<std::int32_t>(os, g.nx);
  detail::put<std::int32_t>(os, g.ny);
  detail::put<std::int32_t>(os, g.block_w);
  detail::put<std::int32_t>(os, g.block_h);
  detail::put<double>(os, g.h);
  detail::put<double>(os, g.origin_x);
  detail::put<double>(os, g.origin_y);
  detail::put<double>(os, s.time);
  detail::put<std::int64_t>(os, s.step);
  const auto& names = snapshot_fields();
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(names.size()));
  for (const auto& n : names) {
    detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(n.size()));
    os.write(n.data(), static_cast<std::streamsize>(n.size()));
  }
  for (const Field* f : {&st.H, &st.hu, &st.hv, &st.b})
    for (double v : f->values()) detail::put<double>(os, v);
  for (std::size_t k = 0; k < st.H.size(); ++k) detail::put<double>(os, detail::velocity(st.hu[k], st.H[k], eps_dry));
  for (std::size_t k = 0; k < st.H.size(); ++k) detail::put<double>(os, detail::velocity(st.hv[k], st.H[k], eps_dry));
  for (std::size_t k = 0; k < st.H.size(); ++k) detail::put<double>(os, st.H[k] + st.b[k]);
  if (!os) throw Error("snapshot write failed");
}

inline Snapshot read_snapshot(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != snapshot_magic) throw FormatError("not a snapshot file");
  const auto version = detail::get<std::uint32_t>(in, "version");
  if (version != snapshot_version) throw FormatError("unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.grid.nx = detail::get<std::int32_t>(in, "nx");
  s.grid.ny = detail::get<std::int32_t>(in, "ny");
  s.grid.block_w = detail::get<std::int32_t>(in, "block_w");
  s.grid.block_h = detail::get<std::int32_t>(in, "block_h");
  if (s.grid.nx <= 0 || s.grid.ny <= 0 || s.grid.block_w <= 0 || s.grid.block_h <= 0)
    throw FormatError("snapshot has non-positive dimensions");
  s.grid.h = detail::get<double>(in, "h");
  s.grid.origin_x = detail::get<double>(in, "origin_x");
  s.grid.origin_y = detail::get<double>(in, "origin_y");
  s.time = detail::get<double>(in, "time");
  s.step = detail::get<std::int64_t>(in, "step");
  const auto count = detail::get<std::uint32_t>(in, "field count");
  if (count > 64) throw FormatError("implausible snapshot field count");
  std::vector<std::string> names(count);
  for (auto& n : names) {
    const auto len = detail::get<std::uint8_t>(in, "field name");
    n.resize(len);
    if (!in.read(n.data(), len)) throw FormatError("snapshot truncated in field list");
  }
  const int nx = s.grid.nx, ny = s.grid.ny;
  s.state = FlowState{Field(nx, ny), Field(nx, ny), Field(nx, ny), Field(nx, ny)};
  std::array<bool, 4> seen{};
  Field scratch(nx, ny);
  for (const auto& n : names) {
    Field* target = &scratch;
    if (n == "H") target = &s.state.H, seen[0] = true;
    else if (n == "hu") target = &s.state.hu, seen[1] = true;
    else if (n == "hv") target = &s.state.hv, seen[2] = true;
    else if (n == "b") target = &s.state.b, seen[3] = true;
    for (std::size_t k = 0; k < target->size(); ++k) (*target)[k] = detail::get<double>(in, n.c_str());
  }
  for (bool b : seen)
    if (!b) throw FormatError("snapshot lacks one of the fields H, hu, hv, b");
  return s;
}

inline void write_snapshot(const std::filesystem::path& path, const Snapshot& s, double eps_dry = 1e-6) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write snapshot " + path.string());
  write_snapshot(os, s, eps_dry);
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

/// One line per cell: i, j, cell-center coordinates and the snapshot fields.
inline void write_csv(std::ostream& os, const Snapshot& s, double eps_dry = 1e-6) {
  const SimGrid& g = s.grid;
  const FlowState& st = s.state;
  os << std::setprecision(17) << "i,j,x,y,H,u,v,b,eta\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double H = st.H(i, j);
      os << i << ',' << j << ',' << g.x_center(i) << ',' << g.y_center(j) << ',' << H << ','
         << detail::velocity(st.hu(i, j), H, eps_dry) << ',' << detail::velocity(st.hv(i, j), H, eps_dry) << ','
         << st.b(i, j) << ',' << H + st.b(i, j) << '\n';
    }
  }
}

}  // namespace swsed::io
