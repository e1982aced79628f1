#pragma once

// Scenario files: flat `key = value` lines grouped in [sections].
//
//   [grid]     nx, ny, h, block_w, block_h, origin_x, origin_y
//   [bed]      type = flat | slope | bumps | hump | dem, plus the keys of that type
//   [initial]  type = surface | dam_break | channel, plus the keys of that type
//   [physics]  PhysParams values; manning_file / beta_file name ESRI grids
//   [sources]  rain, rain_file, point = i j rate (repeatable), west/east/south/north = wall | open
//   [run]      t_end, snapshot_every, snapshot_every_steps, max_steps, dt_max,
//              workers, dense_sweep, output, reference = none | ritter | stoker
//
// '#' and ';' start comments. Relative file names resolve against the
// directory of the scenario file.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "swsed/analytic.hpp"
#include "swsed/engine.hpp"
#include "swsed/errors.hpp"
#include "swsed/grid.hpp"
#include "swsed/io/esri.hpp"
#include "swsed/params.hpp"
#include "swsed/state.hpp"

namespace swsed::io {

enum class BedKind { flat, slope, bumps, hump, dem };
enum class InitialKind { surface, dam_break, channel };
enum class Reference { none, ritter, stoker };

struct BedSpec {
  BedKind kind = BedKind::flat;
  double elevation = 0.0;  ///< base level for every analytic type
  // slope: elevation + slope_x (x - origin_x) + slope_y (y - origin_y)
  double slope_x = 0.0;
  double slope_y = 0.0;
  // bumps: Gaussian mounds with random centers, heights and radii
  int bump_count = 40;
  std::uint64_t seed = 1;
  double bump_height = 1.5;  ///< heights drawn from [0, bump_height)
  double radius_min = 5.0;   ///< m
  double radius_max = 25.0;  ///< m
  // hump: cos^2 ridge across the x axis
  double hump_center = 30.0;
  double hump_half_width = 10.0;
  double hump_height = 0.1;
  // dem
  std::filesystem::path dem_file;
  std::optional<double> nodata_fill;
  double wall_margin = 100.0;

  bool operator==(const BedSpec&) const = default;
};

struct InitialSpec {
  InitialKind kind = InitialKind::surface;
  double surface = 0.0;  ///< surface: constant free surface elevation
  // dam_break: depth_left for x < dam_x, depth_right elsewhere, at rest
  double dam_x = 0.0;
  double depth_left = 1.0;
  double depth_right = 0.0;
  // channel: steady discharge per unit width along +x, with `depth` over the
  // base bed level and a subcritical Bernoulli profile over bed features
  double discharge = 0.0;
  double depth = 1.0;

  bool operator==(const InitialSpec&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SimGrid grid{100, 100, 1.0, 16, 16};  ///< dimensions and h are replaced by the DEM's for bed type dem
  BedSpec bed;
  InitialSpec initial;
  PhysParams params;
  std::filesystem::path manning_file;
  std::filesystem::path beta_file;
  std::filesystem::path rain_file;
  SourceInputs sources;
  Schedule schedule{10.0};
  int workers = 1;
  bool dense_sweep = false;
  double dt_max = 1.0e6;  ///< cap on the step, and the step taken while the domain is dry
  std::filesystem::path output_dir = "output";
  Reference reference = Reference::none;
  std::filesystem::path base_dir;  ///< relative file names resolve against this
};

/// Everything needed to construct an Engine.
struct Scenario {
  SimGrid grid;
  FlowState initial;
  PhysParams params;
  SourceInputs sources;
  Schedule schedule;
  EngineOptions options;
};

inline std::string_view to_string(BedKind k) {
  switch (k) {
    case BedKind::flat: return "flat";
    case BedKind::slope: return "slope";
    case BedKind::bumps: return "bumps";
    case BedKind::hump: return "hump";
    case BedKind::dem: return "dem";
  }
  return "?";
}

inline std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::surface: return "surface";
    case InitialKind::dam_break: return "dam_break";
    case InitialKind::channel: return "channel";
  }
  return "?";
}

inline std::string_view to_string(Reference r) {
  switch (r) {
    case Reference::none: return "none";
    case Reference::ritter: return "ritter";
    case Reference::stoker: return "stoker";
  }
  return "?";
}

namespace detail {

template <class T>
T parse_number(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError(line, "bad value '" + std::string(v) + "' for " + std::string(key));
  return out;
}

inline bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(line, "bad boolean '" + std::string(v) + "' for " + std::string(key));
}

template <class E, std::size_t N>
E parse_enum(std::string_view v, const E (&options)[N], std::size_t line, std::string_view key) {
  for (E e : options)
    if (to_string(e) == v) return e;
  throw ParseError(line, "bad value '" + std::string(v) + "' for " + std::string(key));
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Discards everything from the first '#' or ';'.
inline std::string_view strip_comment(std::string_view s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Parses scenario text. `base_dir` is recorded for resolving file names.
inline ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  using detail::parse_bool;
  using detail::parse_number;
  ScenarioConfig c;
  c.base_dir = base_dir;
  std::string section;
  std::string raw;
  std::size_t line = 0;

  static constexpr BedKind bed_kinds[] = {BedKind::flat, BedKind::slope, BedKind::bumps, BedKind::hump,
                                          BedKind::dem};
  static constexpr InitialKind initial_kinds[] = {InitialKind::surface, InitialKind::dam_break,
                                                  InitialKind::channel};
  static constexpr Reference references[] = {Reference::none, Reference::ritter, Reference::stoker};
  static constexpr Limiter limiters[] = {Limiter::minmod, Limiter::superbee, Limiter::monotonized_central};
  static constexpr AjMode aj_modes[] = {AjMode::constant, AjMode::depth_dependent};
  static constexpr BoundaryKind boundaries[] = {BoundaryKind::wall, BoundaryKind::open};

  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = detail::trim(detail::strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(line, "unterminated section header");
      section = std::string(detail::trim(text.substr(1, text.size() - 2)));
      static const std::vector<std::string> known{"grid", "bed", "initial", "physics", "sources", "run", "scenario"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ParseError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key = value");
    const std::string key(detail::trim(text.substr(0, eq)));
    const std::string_view v = detail::trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key before '='");
    if (v.empty()) throw ParseError(line, "missing value for " + key);
    if (section.empty()) throw ParseError(line, "key " + key + " outside any section");

    auto num = [&](auto& field) { field = parse_number<std::remove_reference_t<decltype(field)>>(v, line, key); };
    bool handled = true;
    if (section == "scenario") {
      if (key == "name") c.name = std::string(v);
      else handled = false;
    } else if (section == "grid") {
      if (key == "nx") num(c.grid.nx);
      else if (key == "ny") num(c.grid.ny);
      else if (key == "h") num(c.grid.h);
      else if (key == "block_w") num(c.grid.block_w);
      else if (key == "block_h") num(c.grid.block_h);
      else if (key == "origin_x") num(c.grid.origin_x);
      else if (key == "origin_y") num(c.grid.origin_y);
      else handled = false;
    } else if (section == "bed") {
      BedSpec& b = c.bed;
      if (key == "type") b.kind = detail::parse_enum(v, bed_kinds, line, key);
      else if (key == "elevation") num(b.elevation);
      else if (key == "slope_x") num(b.slope_x);
      else if (key == "slope_y") num(b.slope_y);
      else if (key == "bump_count") num(b.bump_count);
      else if (key == "seed") num(b.seed);
      else if (key == "bump_height") num(b.bump_height);
      else if (key == "radius_min") num(b.radius_min);
      else if (key == "radius_max") num(b.radius_max);
      else if (key == "hump_center") num(b.hump_center);
      else if (key == "hump_half_width") num(b.hump_half_width);
      else if (key == "hump_height") num(b.hump_height);
      else if (key == "dem_file") b.dem_file = std::string(v);
      else if (key == "nodata_fill") b.nodata_fill = parse_number<double>(v, line, key);
      else if (key == "wall_margin") num(b.wall_margin);
      else handled = false;
    } else if (section == "initial") {
      InitialSpec& s = c.initial;
      if (key == "type") s.kind = detail::parse_enum(v, initial_kinds, line, key);
      else if (key == "surface") num(s.surface);
      else if (key == "dam_x") num(s.dam_x);
      else if (key == "depth_left") num(s.depth_left);
      else if (key == "depth_right") num(s.depth_right);
      else if (key == "discharge") num(s.discharge);
      else if (key == "depth") num(s.depth);
      else handled = false;
    } else if (section == "physics") {
      PhysParams& p = c.params;
      if (key == "g") num(p.g);
      else if (key == "porosity") num(p.psi);
      else if (key == "manning") p.manning = parse_number<double>(v, line, key);
      else if (key == "manning_file") c.manning_file = std::string(v);
      else if (key == "absorption") p.beta = parse_number<double>(v, line, key);
      else if (key == "beta_file") c.beta_file = std::string(v);
      else if (key == "aj_mode") p.aj_mode = detail::parse_enum(v, aj_modes, line, key);
      else if (key == "aj") num(p.aj);
      else if (key == "grass_exponent") num(p.m_exp);
      else if (key == "slope_correction") num(p.c_j);
      else if (key == "shamov") num(p.c_sh);
      else if (key == "s_rel") num(p.s_rel);
      else if (key == "d50") num(p.d50);
      else if (key == "coriolis") num(p.f_c);
      else if (key == "courant") num(p.k_cfl);
      else if (key == "eps_dry") num(p.eps_dry);
      else if (key == "limiter") p.limiter = detail::parse_enum(v, limiters, line, key);
      else handled = false;
    } else if (section == "sources") {
      SourceInputs& s = c.sources;
      if (key == "rain") s.rain = parse_number<double>(v, line, key);
      else if (key == "rain_file") c.rain_file = std::string(v);
      else if (key == "point") {
        const auto parts = detail::split_ws(v);
        if (parts.size() != 3) throw ParseError(line, "point expects 'i j rate'");
        s.points.push_back({parse_number<int>(parts[0], line, key), parse_number<int>(parts[1], line, key),
                            parse_number<double>(parts[2], line, key)});
      } else if (key == "west" || key == "east" || key == "south" || key == "north") {
        const int e = key == "west" ? 0 : key == "east" ? 1 : key == "south" ? 2 : 3;
        s.boundary[static_cast<std::size_t>(e)] = detail::parse_enum(v, boundaries, line, key);
      } else {
        handled = false;
      }
    } else if (section == "run") {
      if (key == "t_end") num(c.schedule.t_end);
      else if (key == "snapshot_every") num(c.schedule.snapshot_every);
      else if (key == "snapshot_every_steps") num(c.schedule.snapshot_every_steps);
      else if (key == "max_steps") num(c.schedule.max_steps);
      else if (key == "dt_max") num(c.dt_max);
      else if (key == "workers") num(c.workers);
      else if (key == "dense_sweep") c.dense_sweep = parse_bool(v, line, key);
      else if (key == "output") c.output_dir = std::string(v);
      else if (key == "reference") c.reference = detail::parse_enum(v, references, line, key);
      else handled = false;
    }
    if (!handled) throw ParseError(line, "unknown key '" + key + "' in [" + section + "]");
  }
  return c;
}

inline ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::istringstream in{std::string(text)};
  return parse_scenario(in, base_dir);
}

inline ScenarioConfig read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  ScenarioConfig c = parse_scenario(in, path.parent_path());
  if (c.name == "scenario") c.name = path.stem().string();
  return c;
}

/// Scenario text that parses back to `c`. Per-cell fields that did not come
/// from files are written as their uniform value.
inline std::string format_scenario(const ScenarioConfig& c) {
  using detail::fmt;
  std::ostringstream os;
  const PhysParams& p = c.params;
  os << "[scenario]\nname = " << c.name << "\n\n";
  os << "[grid]\nnx = " << c.grid.nx << "\nny = " << c.grid.ny << "\nh = " << fmt(c.grid.h)
     << "\nblock_w = " << c.grid.block_w << "\nblock_h = " << c.grid.block_h << "\norigin_x = " << fmt(c.grid.origin_x)
     << "\norigin_y = " << fmt(c.grid.origin_y) << "\n\n";
  const BedSpec& b = c.bed;
  os << "[bed]\ntype = " << to_string(b.kind) << "\nelevation = " << fmt(b.elevation);
  switch (b.kind) {
    case BedKind::flat: break;
    case BedKind::slope: os << "\nslope_x = " << fmt(b.slope_x) << "\nslope_y = " << fmt(b.slope_y); break;
    case BedKind::bumps:
      os << "\nbump_count = " << b.bump_count << "\nseed = " << b.seed << "\nbump_height = " << fmt(b.bump_height)
         << "\nradius_min = " << fmt(b.radius_min) << "\nradius_max = " << fmt(b.radius_max);
      break;
    case BedKind::hump:
      os << "\nhump_center = " << fmt(b.hump_center) << "\nhump_half_width = " << fmt(b.hump_half_width)
         << "\nhump_height = " << fmt(b.hump_height);
      break;
    case BedKind::dem:
      os << "\ndem_file = " << b.dem_file.string() << "\nwall_margin = " << fmt(b.wall_margin);
      if (b.nodata_fill) os << "\nnodata_fill = " << fmt(*b.nodata_fill);
      break;
  }
  const InitialSpec& s = c.initial;
  os << "\n\n[initial]\ntype = " << to_string(s.kind);
  switch (s.kind) {
    case InitialKind::surface: os << "\nsurface = " << fmt(s.surface); break;
    case InitialKind::dam_break:
      os << "\ndam_x = " << fmt(s.dam_x) << "\ndepth_left = " << fmt(s.depth_left)
         << "\ndepth_right = " << fmt(s.depth_right);
      break;
    case InitialKind::channel: os << "\ndischarge = " << fmt(s.discharge) << "\ndepth = " << fmt(s.depth); break;
  }
  os << "\n\n[physics]\ng = " << fmt(p.g) << "\nporosity = " << fmt(p.psi);
  if (c.manning_file.empty()) os << "\nmanning = " << fmt(p.manning.uniform);
  else os << "\nmanning_file = " << c.manning_file.string();
  if (c.beta_file.empty()) os << "\nabsorption = " << fmt(p.beta.uniform);
  else os << "\nbeta_file = " << c.beta_file.string();
  os << "\naj_mode = " << to_string(p.aj_mode) << "\naj = " << fmt(p.aj) << "\ngrass_exponent = " << fmt(p.m_exp)
     << "\nslope_correction = " << fmt(p.c_j) << "\nshamov = " << fmt(p.c_sh) << "\ns_rel = " << fmt(p.s_rel)
     << "\nd50 = " << fmt(p.d50) << "\ncoriolis = " << fmt(p.f_c) << "\ncourant = " << fmt(p.k_cfl)
     << "\neps_dry = " << fmt(p.eps_dry) << "\nlimiter = " << to_string(p.limiter) << "\n\n";
  os << "[sources]\n";
  if (c.rain_file.empty()) os << "rain = " << fmt(c.sources.rain.uniform) << '\n';
  else os << "rain_file = " << c.rain_file.string() << '\n';
  for (const auto& pt : c.sources.points) os << "point = " << pt.i << ' ' << pt.j << ' ' << fmt(pt.rate) << '\n';
  static constexpr const char* edges[] = {"west", "east", "south", "north"};
  for (std::size_t e = 0; e < 4; ++e) os << edges[e] << " = " << to_string(c.sources.boundary[e]) << '\n';
  os << "\n[run]\nt_end = " << fmt(c.schedule.t_end) << "\nsnapshot_every = " << fmt(c.schedule.snapshot_every)
     << "\nsnapshot_every_steps = " << c.schedule.snapshot_every_steps << "\nmax_steps = " << c.schedule.max_steps
     << "\ndt_max = " << fmt(c.dt_max)
     << "\nworkers = " << c.workers << "\ndense_sweep = " << (c.dense_sweep ? "true" : "false")
     << "\noutput = " << c.output_dir.string() << "\nreference = " << to_string(c.reference) << '\n';
  return os.str();
}

namespace detail {

inline std::filesystem::path resolve(const ScenarioConfig& c, const std::filesystem::path& p) {
  return p.is_relative() && !c.base_dir.empty() ? c.base_dir / p : p;
}

inline Field read_cell_field(const ScenarioConfig& c, const std::filesystem::path& file, const SimGrid& grid,
                             std::string_view what) {
  Dem d = read_dem(resolve(c, file));
  if (d.grid.nx != grid.nx || d.grid.ny != grid.ny)
    throw ConfigError(std::string(what) + " grid " + file.string() + " does not match the computational grid");
  if (d.nodata_cells > 0) throw ConfigError(std::string(what) + " grid " + file.string() + " contains NODATA cells");
  return std::move(d.bed);
}

inline Field make_bed(const ScenarioConfig& c, const SimGrid& g) {
  const BedSpec& b = c.bed;
  Field bed(g.nx, g.ny, b.elevation);
  switch (b.kind) {
    case BedKind::flat: break;
    case BedKind::dem: break;
    case BedKind::slope:
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          bed(i, j) += b.slope_x * (g.x_center(i) - g.origin_x) + b.slope_y * (g.y_center(j) - g.origin_y);
      break;
    case BedKind::bumps: {
      if (b.bump_count < 0) throw ConfigError("bump_count must be non-negative");
      if (!(b.radius_min > 0.0) || b.radius_max < b.radius_min) throw ConfigError("need 0 < radius_min <= radius_max");
      std::mt19937_64 rng(b.seed);
      const double width = g.nx * g.h, height = g.ny * g.h;
      for (int n = 0; n < b.bump_count; ++n) {
        const double cx = g.origin_x + unit_draw(rng) * width;
        const double cy = g.origin_y + unit_draw(rng) * height;
        const double a = unit_draw(rng) * b.bump_height;
        const double r = b.radius_min + unit_draw(rng) * (b.radius_max - b.radius_min);
        for (int j = 0; j < g.ny; ++j) {
          for (int i = 0; i < g.nx; ++i) {
            const double dx = g.x_center(i) - cx, dy = g.y_center(j) - cy;
            bed(i, j) += a * std::exp(-(dx * dx + dy * dy) / (r * r));
          }
        }
      }
      break;
    }
    case BedKind::hump: {
      if (!(b.hump_half_width > 0.0)) throw ConfigError("hump_half_width must be positive");
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          const double d = g.x_center(i) - b.hump_center;
          if (std::abs(d) >= b.hump_half_width) continue;
          const double cs = std::cos(std::numbers::pi * d / (2.0 * b.hump_half_width));
          bed(i, j) += b.hump_height * cs * cs;
        }
      }
      break;
    }
  }
  return bed;
}

/// Subcritical depth with specific energy `energy` over a bed raised by `db`
/// for unit discharge q. Throws when the flow would have to become critical.
inline double subcritical_depth(double q, double energy, double db, double g) {
  const double hc = std::cbrt(q * q / g);
  const double target = energy - db;
  if (q == 0.0) return std::max(0.0, target);
  if (target < 1.5 * hc) throw ConfigError("channel discharge too large for the bed: flow would turn critical");
  double H = std::max(target, hc * 1.01);
  for (int it = 0; it < 100; ++it) {
    const double f = H + q * q / (2.0 * g * H * H) - target;
    const double df = 1.0 - q * q / (g * H * H * H);
    const double next = std::max(hc, H - f / df);
    if (std::abs(next - H) <= 1e-15 * H) return next;
    H = next;
  }
  return H;
}

}  // namespace detail

/// Materializes a scenario: reads any referenced files, builds the bed and the
/// initial state, and validates the parameters.
inline Scenario build_scenario(const ScenarioConfig& c) {
  Scenario s;
  s.grid = c.grid;
  Field bed;
  if (c.bed.kind == BedKind::dem) {
    if (c.bed.dem_file.empty()) throw ConfigError("bed type dem needs dem_file");
    DemOptions opt;
    opt.nodata_fill = c.bed.nodata_fill;
    opt.wall_margin = c.bed.wall_margin;
    opt.block_w = c.grid.block_w;
    opt.block_h = c.grid.block_h;
    Dem dem = read_dem(detail::resolve(c, c.bed.dem_file), opt);
    s.grid = dem.grid;
    bed = std::move(dem.bed);
  } else {
    s.grid.validate();
    bed = detail::make_bed(c, s.grid);
  }
  s.grid.validate();
  const SimGrid& g = s.grid;

  s.params = c.params;
  if (!c.manning_file.empty()) s.params.manning = detail::read_cell_field(c, c.manning_file, g, "manning");
  if (!c.beta_file.empty()) s.params.beta = detail::read_cell_field(c, c.beta_file, g, "absorption");
  s.sources = c.sources;
  if (!c.rain_file.empty()) s.sources.rain = detail::read_cell_field(c, c.rain_file, g, "rain");
  s.params.validate();
  s.params.validate_fields(g);
  s.sources.validate(g);

  const InitialSpec& ini = c.initial;
  switch (ini.kind) {
    case InitialKind::surface: s.initial = new_state(g, bed, ConstantSurface{ini.surface}); break;
    case InitialKind::dam_break: {
      if (ini.depth_left < 0.0 || ini.depth_right < 0.0) throw ConfigError("dam break depths must be non-negative");
      Field depth(g.nx, g.ny);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) depth(i, j) = g.x_center(i) < ini.dam_x ? ini.depth_left : ini.depth_right;
      s.initial = new_state(g, bed, DepthField{depth});
      break;
    }
    case InitialKind::channel: {
      if (!(ini.depth > 0.0)) throw ConfigError("channel depth must be positive");
      const double q = ini.discharge;
      const double energy = ini.depth + q * q / (2.0 * s.params.g * ini.depth * ini.depth);
      if (ini.depth < std::cbrt(q * q / s.params.g)) throw ConfigError("channel reference flow is supercritical");
      Field depth(g.nx, g.ny);
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          depth(i, j) = detail::subcritical_depth(q, energy, bed(i, j) - c.bed.elevation, s.params.g);
      s.initial = new_state(g, bed, DepthField{depth});
      for (std::size_t k = 0; k < s.initial.H.size(); ++k) s.initial.hu[k] = s.initial.H[k] > 0.0 ? q : 0.0;
      break;
    }
  }

  s.schedule = c.schedule;
  s.options.workers = c.workers;
  s.options.dense_sweep = c.dense_sweep;
  s.options.dt_max = c.dt_max;
  if (!(c.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  return s;
}

/// Comparison of a dam-break result with its exact solution along the middle
/// grid row. Empty for Reference::none.
inline std::map<std::string, double> reference_metrics(const ScenarioConfig& c, const SimGrid& g,
                                                        const FlowState& s, double time) {
  std::map<std::string, double> m;
  if (c.reference == Reference::none) return m;
  if (c.initial.kind != InitialKind::dam_break) throw ConfigError("reference solutions need a dam_break initial state");
  const int j = g.ny / 2;
  const double hl = c.initial.depth_left;
  if (c.reference == Reference::ritter) {
    const analytic::Ritter exact(hl, c.initial.dam_x, c.params.g);
    double err = 0.0, norm = 0.0, hmax = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const double e = exact.depth(g.x_center(i), time);
      err += std::abs(s.H(i, j) - e);
      norm += e;
      hmax = std::max(hmax, s.H(i, j));
    }
    m["ritter_l1_relative"] = err / norm;
    m["ritter_overshoot"] = std::max(0.0, hmax - hl) / hl;
  } else {
    const analytic::Stoker exact(hl, c.initial.depth_right, c.initial.dam_x, c.params.g);
    const double x0 = c.initial.dam_x;
    const double xa = x0 + (exact.plateau_velocity() - std::sqrt(c.params.g * exact.plateau_depth())) * time;
    const double xb = x0 + exact.shock_speed() * time;
    const double lo = xa + 0.25 * (xb - xa), hi = xb - 0.25 * (xb - xa);
    double sum = 0.0;
    int n = 0;
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x_center(i);
      if (x > lo && x < hi) sum += s.H(i, j), ++n;
    }
    m["stoker_plateau_exact"] = exact.plateau_depth();
    if (n > 0) {
      m["stoker_plateau_depth"] = sum / n;
      m["stoker_plateau_relative"] = std::abs(sum / n / exact.plateau_depth() - 1.0);
    }
  }
  return m;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"dam-break-dry", "dam-break-wet", "lake-at-rest", "grass-hump"};
  return names;
}

/// Benchmark scenarios.
inline ScenarioConfig preset_scenario(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "dam-break-dry" || name == "dam-break-wet") {
    const bool wet = name == "dam-break-wet";
    c.grid = SimGrid{400, 3, 1.0, 16, 3};
    c.initial.kind = InitialKind::dam_break;
    c.initial.dam_x = 200.0;
    c.initial.depth_left = 1.0;
    c.initial.depth_right = wet ? 0.1 : 0.0;
    c.params.aj = 0.0;
    c.params.k_cfl = 0.5;
    // The dry front moves at 2 sqrt(g h0): stop once it has crossed 100 cells.
    c.schedule.t_end = 100.0 / (2.0 * std::sqrt(c.params.g * c.initial.depth_left));
    c.schedule.snapshot_every = c.schedule.t_end / 4.0;
    c.reference = wet ? Reference::stoker : Reference::ritter;
  } else if (name == "lake-at-rest") {
    c.grid = SimGrid{256, 256, 1.0, 16, 16};
    c.bed.kind = BedKind::bumps;
    c.bed.bump_count = 40;
    c.bed.seed = 7;
    c.bed.bump_height = 1.5;
    c.bed.radius_min = 5.0;
    c.bed.radius_max = 25.0;
    c.initial.kind = InitialKind::surface;
    c.initial.surface = 1.0;
    c.params.manning = 0.02;
    c.schedule.t_end = 100.0;
  } else if (name == "grass-hump") {
    c.grid = SimGrid{200, 3, 0.5, 16, 3};
    c.bed.kind = BedKind::hump;
    c.bed.hump_center = 30.0;
    c.bed.hump_half_width = 10.0;
    c.bed.hump_height = 0.1;
    c.initial.kind = InitialKind::channel;
    c.initial.discharge = 1.5;
    c.initial.depth = 1.0;
    c.params.aj = 0.001;
    c.params.m_exp = 2.0;
    c.params.psi = 0.4;
    c.params.c_sh = 0.0;
    c.params.c_j = 2.0;
    c.sources.boundary = {BoundaryKind::open, BoundaryKind::open, BoundaryKind::wall, BoundaryKind::wall};
    c.schedule.t_end = 60.0;
    c.schedule.snapshot_every = 10.0;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  c.output_dir = c.name;
  return c;
}

}  // namespace swsed::io
