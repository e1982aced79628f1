#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "fixtures.hpp"

namespace swsed {
namespace {

FlowState wet_mounds(const SimGrid& g) {
  return testing::dam_break(g, 0.4 * g.nx * g.h, 1.4, 0.6, testing::mounds(g, 21, 6, 0.5));
}

PhysParams transport() {
  PhysParams p;
  p.aj = 1e-3;
  p.c_j = 1.0;
  p.manning = 0.025;
  return p;
}

Schedule steps(std::int64_t n) {
  Schedule s;
  s.t_end = std::numeric_limits<double>::infinity();
  s.max_steps = n;
  return s;
}

TEST(Engine, WorkerCountDoesNotChangeResults) {
  const SimGrid g{48, 64, 1.0, 16, 8};
  const FlowState s = wet_mounds(g);
  EngineOptions one;
  const auto a = run(s, transport(), g, steps(120), {}, one);
  for (int w : {2, 3, 4, 8}) {
    EngineOptions o;
    o.workers = w;
    const auto b = run(s, transport(), g, steps(120), {}, o);
    EXPECT_EQ(a.state, b.state) << w << " workers";
    EXPECT_EQ(a.report.sim_time, b.report.sim_time);
  }
}

TEST(Engine, RepeatedRunsAreBitwiseEqual) {
  const SimGrid g{40, 40, 1.0, 8, 8};
  EngineOptions o;
  o.workers = 4;
  const auto a = run(wet_mounds(g), transport(), g, steps(80), {}, o);
  const auto b = run(wet_mounds(g), transport(), g, steps(80), {}, o);
  EXPECT_EQ(a.state, b.state);
}

TEST(Engine, ZeroEndTimeTakesNoSteps) {
  const SimGrid g{16, 16, 1.0};
  const FlowState s = wet_mounds(g);
  std::vector<std::int64_t> emitted;
  const auto r = run(s, PhysParams{}, g, Schedule{0.0}, {}, {},
                     [&](double, std::int64_t step, const FlowState&) { emitted.push_back(step); });
  EXPECT_EQ(r.report.steps, 0);
  EXPECT_EQ(r.state, s);
  EXPECT_EQ(emitted, (std::vector<std::int64_t>{0}));
}

TEST(Engine, InfiniteSnapshotIntervalEmitsOnlyFinalState) {
  const SimGrid g{16, 16, 1.0};
  std::vector<double> times;
  const auto r = run(wet_mounds(g), PhysParams{}, g, Schedule{3.0}, {}, {},
                     [&](double t, std::int64_t, const FlowState&) { times.push_back(t); });
  ASSERT_EQ(times.size(), 1u);
  EXPECT_EQ(times[0], 3.0);
  EXPECT_GT(r.report.steps, 1);
}

TEST(Engine, SnapshotTimesAreHitExactly) {
  const SimGrid g{16, 16, 1.0};
  Schedule s{2.0, 0.5};
  std::vector<double> times;
  run(wet_mounds(g), PhysParams{}, g, s, {}, {}, [&](double t, std::int64_t, const FlowState&) { times.push_back(t); });
  EXPECT_EQ(times, (std::vector<double>{0.5, 1.0, 1.5, 2.0}));
}

TEST(Engine, StepIntervalSnapshots) {
  const SimGrid g{16, 16, 1.0};
  Schedule s = steps(10);
  s.snapshot_every_steps = 4;
  std::vector<std::int64_t> seen;
  run(wet_mounds(g), PhysParams{}, g, s, {}, {}, [&](double, std::int64_t n, const FlowState&) { seen.push_back(n); });
  EXPECT_EQ(seen, (std::vector<std::int64_t>{4, 8, 10}));
}

TEST(Engine, ExcessiveCourantRaisesWithLastGoodState) {
  const SimGrid g{64, 16, 1.0};
  const FlowState s = testing::dam_break(g, 32.0, 2.0, 0.0);
  EngineOptions o;
  o.courant_override = 1.5;
  Engine e(g, PhysParams{}, {}, s, o);
  try {
    e.run(steps(200));
    FAIL() << "no instability detected";
  } catch (const InstabilityError& err) {
    EXPECT_TRUE(all_finite(err.last_good()));
    for (double v : err.last_good().H.values()) EXPECT_GE(v, 0.0);
    EXPECT_GE(err.cell(), 0);
    EXPECT_LT(err.cell(), static_cast<std::int64_t>(g.cells()));
    EXPECT_EQ(err.last_good(), s);
  }
}

TEST(Engine, ModerateCourantStaysStable) {
  const SimGrid g{64, 16, 1.0};
  EngineOptions o;
  o.courant_override = 0.8;
  EXPECT_NO_THROW(run(testing::dam_break(g, 32.0, 2.0, 0.0), PhysParams{}, g, steps(300), {}, o));
}

TEST(Engine, StepReportsLimitingTerm) {
  const SimGrid g{16, 16, 1.0};
  Engine e(g, PhysParams{}, {}, new_state(g, Field(16, 16, 0.0), ConstantSurface{1.0}));
  const DtResult r = e.step();
  EXPECT_EQ(r.limiting_term, LimitingTerm::gravity_wave);
  EXPECT_NEAR(r.tau, 0.45 / std::sqrt(9.81), 1e-14);
  EXPECT_EQ(e.steps(), 1);
  EXPECT_EQ(e.time(), r.tau);
}

TEST(Engine, RejectsBadInputs) {
  const SimGrid g{16, 16, 1.0};
  EngineOptions o;
  o.workers = 0;
  EXPECT_THROW(Engine(g, PhysParams{}, {}, o), ConfigError);
  PhysParams p;
  p.k_cfl = 1.2;
  EXPECT_THROW(Engine(g, p, {}), ConfigError);
  FlowState s = wet_mounds(g);
  s.H(3, 3) = -0.1;
  EXPECT_THROW(Engine(g, PhysParams{}, {}, s), DomainError);
}

TEST(Engine, ReportAccountsEveryStage) {
  const SimGrid g{64, 64, 1.0};
  const auto r = run(wet_mounds(g), transport(), g, steps(30));
  EXPECT_EQ(r.report.timings.steps, 30);
  const auto shares = r.report.timings.shares();
  EXPECT_NEAR(std::accumulate(shares.begin(), shares.end(), 0.0), 100.0, 1e-9);
  for (double s : r.report.timings.seconds) EXPECT_GE(s, 0.0);
  EXPECT_EQ(r.report.occupancy.size(), 30u);
  EXPECT_GT(r.report.throughput, 0.0);
}

TEST(TimingReport, DominantStage) {
  StageTimings t;
  t.seconds = {1.0, 5.0, 2.0, 6.0, 5.0, 3.0, 58.5, 19.5};
  t.steps = 10;
  const TimingReport r = timing_report(t);
  EXPECT_EQ(r.dominant, 6);
  EXPECT_FALSE(r.tie);
  EXPECT_NEAR(r.shares[6], 58.5, 1e-12);
  EXPECT_NE(r.text.find("K7  58.5%  <- dominant"), std::string::npos);
}

TEST(TimingReport, UniformSharesTieToFirstStage) {
  StageTimings t;
  t.seconds.fill(0.25);
  t.steps = 1;
  const TimingReport r = timing_report(t);
  EXPECT_EQ(r.dominant, 0);
  EXPECT_TRUE(r.tie);
  EXPECT_EQ(r.shares[3], 12.5);
}

TEST(TimingReport, NoStepsIsAnError) {
  StageTimings t;
  EXPECT_THROW(timing_report(t), Error);
  t.steps = 3;
  EXPECT_THROW(timing_report(t), Error);
}

TEST(RunReport, KeyValueOutput) {
  const SimGrid g{16, 16, 1.0};
  const auto r = run(wet_mounds(g), PhysParams{}, g, steps(5));
  const std::string kv = r.report.to_key_values();
  EXPECT_NE(kv.find("steps=5\n"), std::string::npos);
  EXPECT_NE(kv.find("metric.max_speed="), std::string::npos);
  EXPECT_NE(kv.find("stage.dominant=K"), std::string::npos);
}

}  // namespace
}  // namespace swsed
