#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "swsed/physics.hpp"

namespace swsed {
namespace {

TEST(GrassFlux, AlongX) {
  const BedloadFlux j = grass_flux({0.1, 0.0}, 1.0, 2.0);
  EXPECT_NEAR(j.jx, 0.001, 1e-15);
  EXPECT_EQ(j.jy, 0.0);
}

TEST(GrassFlux, ThreeFourFive) {
  const BedloadFlux j = grass_flux({3.0, 4.0}, 0.001, 2.0);
  EXPECT_NEAR(j.jx, 0.075, 1e-14);
  EXPECT_NEAR(j.jy, 0.1, 1e-14);
}

TEST(GrassFlux, ZeroVelocityGivesZero) {
  EXPECT_EQ(grass_flux({0.0, 0.0}, 0.5, 3.0), BedloadFlux{});
  EXPECT_EQ(grass_flux({0.0, 0.0}, 0.5, 0.0), BedloadFlux{});
}

TEST(GrassFlux, IsOddInVelocity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), m(0.5, 4.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 v{u(rng), u(rng)};
    const double e = m(rng);
    const BedloadFlux a = grass_flux(v, 0.01, e), b = grass_flux({-v.x, -v.y}, 0.01, e);
    EXPECT_EQ(a.jx, -b.jx);
    EXPECT_EQ(a.jy, -b.jy);
  }
}

TEST(GrassFlux, GeneralExponentMatchesPower) {
  const BedloadFlux j = grass_flux({2.0, 0.0}, 0.1, 3.0);
  EXPECT_NEAR(j.jx, 0.1 * 2.0 * 8.0, 1e-14);
}

TEST(AjCoefficient, Example) {
  EXPECT_NEAR(aj_coefficient(0.02, 2.65, 1.0, 1e-3, 9.81), 7.74e-5, 5e-8);
}

TEST(AjCoefficient, NoRoughnessNoTransport) { EXPECT_EQ(aj_coefficient(0.0, 2.65, 1.0, 1e-3, 9.81), 0.0); }

TEST(AjCoefficient, CubicInManning) {
  const double a = aj_coefficient(0.02, 2.65, 0.7, 2e-3, 9.81);
  const double b = aj_coefficient(0.04, 2.65, 0.7, 2e-3, 9.81);
  EXPECT_NEAR(b / a, 8.0, 1e-12);
}

TEST(AjCoefficient, RejectsOutOfDomain) {
  EXPECT_THROW(aj_coefficient(0.02, 2.65, 0.0, 1e-3, 9.81), DomainError);
  EXPECT_THROW(aj_coefficient(0.02, 2.65, 1.0, 0.0, 9.81), DomainError);
  EXPECT_THROW(aj_coefficient(0.02, 1.0, 1.0, 1e-3, 9.81), DomainError);
}

TEST(Shamov, Example) { EXPECT_NEAR(shamov_threshold(1e-3, 1.0, 5.0), 0.5, 1e-14); }

TEST(Shamov, DryCellNeverMoves) {
  EXPECT_EQ(shamov_threshold(1e-3, 0.0, 5.0), std::numeric_limits<double>::infinity());
}

TEST(Shamov, SixthRootDepthScaling) {
  const double a = shamov_threshold(1e-3, 1.0, 5.0);
  const double b = shamov_threshold(1e-3, std::pow(1.5, 6.0), 5.0);
  EXPECT_NEAR(b / a, 1.5, 1e-13);
}

TEST(SlopeCorrection, DownslopeReducesFlux) {
  const BedloadFlux j = slope_corrected_flux({0.01, 0.0}, {0.1, 0.0}, 2.0);
  EXPECT_NEAR(j.jx, 0.008, 1e-16);
  EXPECT_EQ(j.jy, 0.0);
}

TEST(SlopeCorrection, ZeroConstantIsIdentity) {
  const BedloadFlux j0{0.3, -0.2};
  EXPECT_EQ(slope_corrected_flux(j0, {5.0, 7.0}, 0.0), j0);
}

TEST(BedloadFlux, BelowThresholdIsExactlyZero) {
  PhysParams p;
  p.aj = 0.01;
  p.c_sh = 5.0;
  p.d50 = 1e-3;
  const BedloadFlux j = bedload_flux(p, 1.0, {0.49, 0.0}, 0.0, {0.0, 0.0});
  EXPECT_EQ(j.jx, 0.0);
  EXPECT_EQ(j.jy, 0.0);
  EXPECT_GT(bedload_flux(p, 1.0, {0.51, 0.0}, 0.0, {0.0, 0.0}).jx, 0.0);
}

TEST(BedloadFlux, DryCellIsExactlyZero) {
  PhysParams p;
  p.aj = 0.01;
  EXPECT_EQ(bedload_flux(p, 0.5 * p.eps_dry, {3.0, 0.0}, 0.0, {0.0, 0.0}), BedloadFlux{});
}

TEST(BedloadFlux, DepthDependentMode) {
  PhysParams p;
  p.aj_mode = AjMode::depth_dependent;
  const BedloadFlux j = bedload_flux(p, 1.0, {1.0, 0.0}, 0.02, {0.0, 0.0});
  EXPECT_NEAR(j.jx, aj_coefficient(0.02, p.s_rel, 1.0, p.d50, p.g), 1e-18);
}

TEST(BedExchange, DefaultIsPureBedload) {
  PhysParams p;
  const BedExchange q = bed_exchange(CellSample{1.0, 0.5, 0.0, 0.0}, p);
  EXPECT_EQ(q.q_plus, 0.0);
  EXPECT_EQ(q.q_minus, 0.0);
}

TEST(BedExchange, ClosureValuesPassThrough) {
  PhysParams p;
  const BedExchangeClosure c = [](const CellSample& s, const PhysParams&) {
    return BedExchange{1e-4 * s.H, 2e-4};
  };
  const BedExchange q = bed_exchange(CellSample{2.0, 0.0, 0.0, 0.0}, p, c);
  EXPECT_EQ(q.q_plus, 2e-4);
  EXPECT_EQ(q.q_minus, 2e-4);
}

TEST(BedExchange, DryCellSkipsClosure) {
  PhysParams p;
  bool called = false;
  const BedExchangeClosure c = [&](const CellSample&, const PhysParams&) {
    called = true;
    return BedExchange{1.0, 1.0};
  };
  const BedExchange q = bed_exchange(CellSample{0.0, 0.0, 0.0, 0.0}, p, c);
  EXPECT_FALSE(called);
  EXPECT_EQ(q.q_plus, 0.0);
}

TEST(BedExchange, NegativeRateRejected) {
  PhysParams p;
  const BedExchangeClosure c = [](const CellSample&, const PhysParams&) { return BedExchange{-1.0, 0.0}; };
  EXPECT_THROW(bed_exchange(CellSample{1.0, 0.0, 0.0, 0.0}, p, c), DomainError);
}

TEST(Friction, Example) {
  const Vec2 a = friction_slope(1.0, 1.0, 0.0, 0.02, 9.81);
  EXPECT_NEAR(a.x, -3.924e-3, 1e-15);
  EXPECT_EQ(a.y, 0.0);
}

TEST(Friction, OpposesVelocity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> q(-2.0, 2.0), h(0.01, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double H = h(rng), hu = q(rng), hv = q(rng);
    const Vec2 a = friction_slope(H, hu, hv, 0.03, 9.81);
    EXPECT_LE(a.x * hu + a.y * hv, 0.0);
    EXPECT_NEAR(a.x * hv - a.y * hu, 0.0, 1e-12);
  }
}

TEST(Friction, FactorShrinksButNeverFlips) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> s(0.0, 50.0), h(1e-5, 2.0), dt(0.0, 100.0);
  for (int k = 0; k < 500; ++k) {
    const double f = friction_factor(h(rng), s(rng), 0.05, 9.81, dt(rng));
    EXPECT_GT(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  EXPECT_EQ(friction_factor(1.0, 1.0, 0.0, 9.81, 1.0), 1.0);
}

TEST(Coriolis, RotatesClockwiseForPositiveF) {
  const Vec2 a = coriolis({1.0, 0.0}, 1e-4);
  EXPECT_EQ(a.x, 0.0);
  EXPECT_EQ(a.y, -1e-4);
}

TEST(Sigma, RainMinusAbsorption) {
  EXPECT_DOUBLE_EQ(sigma_source(2.0, 1e-5, 0.0), 1e-5);
  EXPECT_DOUBLE_EQ(sigma_source(2.0, 1e-5, 1e-5), -1e-5);
  EXPECT_DOUBLE_EQ(sigma_source(0.0, 0.0, 1.0), 0.0);
}

TEST(Sigma, BoundedByAvailableWater) {
  const double H = 0.01, dt = 1.0;
  const double s = sigma_source(H, 0.0, 10.0, dt);
  EXPECT_DOUBLE_EQ(s, -H / dt);
  EXPECT_GE(H + dt * s, 0.0);
}

}  // namespace
}  // namespace swsed
