#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "swsed/io/scenario.hpp"

namespace swsed::io {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("swsed_scenario_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(Presets, FormatParseRoundTrip) {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = preset_scenario(name);
    const std::string text = format_scenario(c);
    const ScenarioConfig back = parse_scenario(text);
    EXPECT_EQ(format_scenario(back), text) << name;
    EXPECT_EQ(back.grid, c.grid);
    EXPECT_EQ(back.bed, c.bed);
    EXPECT_EQ(back.initial, c.initial);
    EXPECT_EQ(back.schedule.t_end, c.schedule.t_end);
    EXPECT_EQ(back.params.aj, c.params.aj);
    EXPECT_EQ(back.params.k_cfl, c.params.k_cfl);
  }
}

TEST(Presets, AllBuild) {
  for (const auto& name : preset_names()) {
    const Scenario s = build_scenario(preset_scenario(name));
    EXPECT_TRUE(s.initial.H.same_shape(s.grid.nx, s.grid.ny)) << name;
    EXPECT_TRUE(all_finite(s.initial)) << name;
  }
}

TEST(Presets, Fields) {
  const ScenarioConfig dry = preset_scenario("dam-break-dry");
  EXPECT_EQ(dry.grid.nx, 400);
  EXPECT_EQ(dry.initial.depth_right, 0.0);
  EXPECT_EQ(dry.reference, Reference::ritter);
  EXPECT_EQ(preset_scenario("dam-break-wet").initial.depth_right, 0.1);

  const ScenarioConfig lake = preset_scenario("lake-at-rest");
  EXPECT_EQ(lake.grid.nx, 256);
  EXPECT_EQ(lake.bed.bump_count, 40);
  EXPECT_EQ(lake.params.manning.uniform, 0.02);

  const Scenario hump = build_scenario(preset_scenario("grass-hump"));
  EXPECT_EQ(hump.sources.at(Edge::east), BoundaryKind::open);
  EXPECT_EQ(hump.initial.hu(0, 1), 1.5);
  EXPECT_NEAR(hump.initial.b(59, 1), 0.1, 1e-3);
  EXPECT_LT(hump.initial.H(59, 1), hump.initial.H(0, 1));
}

TEST(Presets, UnknownNameListsKnownOnes) {
  try {
    preset_scenario("no-such");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lake-at-rest"), std::string::npos);
  }
}

TEST(Presets, LakeBedIsDeterministic) {
  const Scenario a = build_scenario(preset_scenario("lake-at-rest"));
  const Scenario b = build_scenario(preset_scenario("lake-at-rest"));
  EXPECT_EQ(a.initial, b.initial);
  double top = 0.0;
  for (double v : a.initial.b.values()) top = std::max(top, v);
  EXPECT_GT(top, 1.0);
}

TEST(ParseScenario, UnknownKeyReportsLine) {
  try {
    parse_scenario(std::string_view("[grid]\nnx = 10\n\n# note\nbogus = 3\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ParseScenario, UnknownSectionReportsLine) {
  try {
    parse_scenario(std::string_view("[grid]\nnx = 10\n[nope]\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseScenario, BadValues) {
  EXPECT_THROW(parse_scenario(std::string_view("[grid]\nnx = ten\n")), ParseError);
  EXPECT_THROW(parse_scenario(std::string_view("[bed]\ntype = volcano\n")), ParseError);
  EXPECT_THROW(parse_scenario(std::string_view("nx = 4\n")), ParseError);
  EXPECT_THROW(parse_scenario(std::string_view("[sources]\npoint = 1 2\n")), ParseError);
  EXPECT_THROW(parse_scenario(std::string_view("[run]\ndense_sweep = maybe\n")), ParseError);
}

TEST(ParseScenario, CommentsAndSources) {
  const ScenarioConfig c = parse_scenario(std::string_view(
      "; header comment\n"
      "[grid]\nnx = 12   # cells\nny = 8\nh = 0.5\n"
      "[sources]\npoint = 3 4 0.25\npoint = 1 1 -0.1\neast = open\nrain = 1e-6\n"
      "[physics]\nlimiter = superbee\naj_mode = depth_dependent\n"));
  EXPECT_EQ(c.grid.nx, 12);
  EXPECT_EQ(c.grid.h, 0.5);
  ASSERT_EQ(c.sources.points.size(), 2u);
  EXPECT_EQ(c.sources.points[1].rate, -0.1);
  EXPECT_EQ(c.sources.at(Edge::east), BoundaryKind::open);
  EXPECT_EQ(c.sources.rain.uniform, 1e-6);
  EXPECT_EQ(c.params.limiter, Limiter::superbee);
  EXPECT_EQ(c.params.aj_mode, AjMode::depth_dependent);
}

TEST(BuildScenario, DtMaxReachesEngineOptions) {
  const ScenarioConfig c = parse_scenario(std::string_view("[grid]\nnx = 8\nny = 8\n[run]\ndt_max = 0.5\n"));
  EXPECT_EQ(c.dt_max, 0.5);
  EXPECT_EQ(build_scenario(c).options.dt_max, 0.5);
  EXPECT_THROW(build_scenario(parse_scenario(std::string_view("[grid]\nnx = 8\nny = 8\n[run]\ndt_max = 0\n"))),
               ConfigError);
}

TEST(BuildScenario, DemBedAndManningField) {
  const fs::path d = scratch_dir("dem");
  {
    std::ofstream f(d / "bed.asc");
    f << "ncols 4\nnrows 3\nxllcorner 10\nyllcorner 20\ncellsize 2\nNODATA_value -9999\n"
      << "3 2 1 -9999\n2 1 0 0\n1 0 0 0\n";
    std::ofstream m(d / "n.asc");
    m << "ncols 4\nnrows 3\nxllcorner 10\nyllcorner 20\ncellsize 2\n"
      << "0.03 0.03 0.03 0.03\n0.02 0.02 0.02 0.02\n0.01 0.01 0.01 0.01\n";
    std::ofstream s(d / "case.ini");
    s << "[bed]\ntype = dem\ndem_file = bed.asc\n[initial]\ntype = surface\nsurface = 1.5\n"
      << "[physics]\nmanning_file = n.asc\n";
  }
  const ScenarioConfig c = read_scenario(d / "case.ini");
  EXPECT_EQ(c.name, "case");
  const Scenario s = build_scenario(c);
  EXPECT_EQ(s.grid.nx, 4);
  EXPECT_EQ(s.grid.h, 2.0);
  EXPECT_EQ(s.grid.origin_x, 10.0);
  EXPECT_EQ(s.initial.b(3, 2), 103.0);
  EXPECT_EQ(s.initial.H(3, 2), 0.0);
  EXPECT_EQ(s.initial.H(0, 0), 0.5);
  EXPECT_EQ(s.params.manning(0, 0), 0.01);
  EXPECT_EQ(s.params.manning(0, 2), 0.03);
}

TEST(BuildScenario, MismatchedFieldFileRejected) {
  const fs::path d = scratch_dir("mismatch");
  {
    std::ofstream m(d / "n.asc");
    m << "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n0 0\n0 0\n";
  }
  ScenarioConfig c;
  c.grid = SimGrid{4, 4, 1.0};
  c.manning_file = d / "n.asc";
  EXPECT_THROW(build_scenario(c), ConfigError);
}

TEST(BuildScenario, MissingFileIsConfigError) {
  ScenarioConfig c;
  c.bed.kind = BedKind::dem;
  c.bed.dem_file = "/nonexistent/bed.asc";
  EXPECT_THROW(build_scenario(c), ConfigError);
}

TEST(BuildScenario, InfeasibleChannelRejected) {
  ScenarioConfig c = preset_scenario("grass-hump");
  c.initial.discharge = 2.0;
  EXPECT_THROW(build_scenario(c), ConfigError);
  c.initial.discharge = 1.5;
  c.initial.depth = 0.5;
  EXPECT_THROW(build_scenario(c), ConfigError);
}

TEST(BuildScenario, SlopeBed) {
  ScenarioConfig c;
  c.grid = SimGrid{5, 4, 2.0};
  c.bed.kind = BedKind::slope;
  c.bed.elevation = 1.0;
  c.bed.slope_x = 0.1;
  const Scenario s = build_scenario(c);
  EXPECT_NEAR(s.initial.b(1, 0) - s.initial.b(0, 0), 0.2, 1e-15);
}

TEST(SubcriticalDepth, SatisfiesBernoulli) {
  const double q = 1.5, g = 9.81, E = 1.0 + q * q / (2 * g);
  for (double db : {0.0, 0.03, 0.1}) {
    const double H = detail::subcritical_depth(q, E, db, g);
    EXPECT_NEAR(H + db + q * q / (2 * g * H * H), E, 1e-12);
    EXPECT_GT(H, std::cbrt(q * q / g));
  }
}

TEST(ReferenceMetrics, RitterOnExactProfileIsZero) {
  const ScenarioConfig c = preset_scenario("dam-break-dry");
  const Scenario s = build_scenario(c);
  FlowState st = s.initial;
  const double t = 5.0;
  const analytic::Ritter exact(1.0, 200.0);
  for (int j = 0; j < s.grid.ny; ++j)
    for (int i = 0; i < s.grid.nx; ++i) st.H(i, j) = exact.depth(s.grid.x_center(i), t);
  const auto m = reference_metrics(c, s.grid, st, t);
  EXPECT_EQ(m.at("ritter_l1_relative"), 0.0);
  EXPECT_EQ(m.at("ritter_overshoot"), 0.0);
}

}  // namespace
}  // namespace swsed::io
