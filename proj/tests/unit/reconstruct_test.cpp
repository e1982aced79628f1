#include <gtest/gtest.h>

#include <cmath>

#include <random>

#include "swsed/reconstruct.hpp"

namespace swsed {
namespace {

TEST(Limiters, ExtremumGivesZero) {
  for (Limiter l : {Limiter::minmod, Limiter::superbee, Limiter::monotonized_central}) {
    EXPECT_EQ(limited_slope(l, 1.0, -1.0), 0.0);
    EXPECT_EQ(limited_slope(l, -0.5, 2.0), 0.0);
    EXPECT_EQ(limited_slope(l, 0.0, 2.0), 0.0);
  }
}

TEST(Limiters, Examples) {
  EXPECT_EQ(minmod(1.0, 3.0), 1.0);
  EXPECT_EQ(minmod(-1.0, -3.0), -1.0);
  EXPECT_EQ(superbee(1.0, 3.0), 2.0);
  EXPECT_EQ(monotonized_central(1.0, 3.0), 2.0);
  EXPECT_DOUBLE_EQ(monotonized_central(1.0, 1.2), 1.1);
}

TEST(Limiters, AgreeOnLinearData) {
  for (Limiter l : {Limiter::minmod, Limiter::superbee, Limiter::monotonized_central})
    EXPECT_EQ(limited_slope(l, 0.25, 0.25), 0.25);
}

TEST(Limiters, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double a = d(rng), b = d(rng);
    for (Limiter l : {Limiter::minmod, Limiter::superbee, Limiter::monotonized_central}) {
      EXPECT_EQ(limited_slope(l, a, b), limited_slope(l, b, a));
      EXPECT_EQ(limited_slope(l, -a, -b), -limited_slope(l, a, b));
      EXPECT_LE(std::abs(limited_slope(l, a, b)), 2.0 * std::min(std::abs(a), std::abs(b)) + 1e-15);
    }
  }
}

TEST(ReconstructCell, ConstantStateIsExact) {
  const CellValues c{1.25, 0.3, -0.125, 0.25};
  const CellFaces f = reconstruct_cell(c, c, c, 1e-6, Limiter::minmod);
  for (const FaceState& s : {f.lo, f.hi}) {
    EXPECT_EQ(s.H, 1.25);
    EXPECT_EQ(s.u, 0.3 / 1.25);
    EXPECT_EQ(s.v, -0.1);
    EXPECT_EQ(s.b, 0.25);
  }
}

TEST(ReconstructCell, RampGivesMidpoints) {
  const CellValues m{1.0, 0.0, 0.0, 0.0}, c{2.0, 0.0, 0.0, 0.0}, p{3.0, 0.0, 0.0, 0.0};
  const CellFaces f = reconstruct_cell(m, c, p, 1e-6, Limiter::minmod);
  EXPECT_EQ(f.lo.H, 1.5);
  EXPECT_EQ(f.hi.H, 2.5);
  EXPECT_EQ(f.eta_slope, 1.0);
}

TEST(ReconstructCell, ExtremumIsFlat) {
  const CellValues m{1.0, 0.0, 0.0, 0.0}, c{2.0, 0.0, 0.0, 0.0}, p{1.5, 0.0, 0.0, 0.0};
  const CellFaces f = reconstruct_cell(m, c, p, 1e-6, Limiter::superbee);
  EXPECT_EQ(f.lo.H, 2.0);
  EXPECT_EQ(f.hi.H, 2.0);
}

TEST(ReconstructCell, FlatSurfaceOverVaryingBed) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> b(-0.5, 0.5);
  for (int k = 0; k < 300; ++k) {
    const double eta = 1.0;
    // Beds on a 2^-10 lattice, so eta - b and its inverse are exact.
    const auto lattice = [&] { return std::round(b(rng) * 1024.0) / 1024.0; };
    const double bm = lattice(), bc = lattice(), bp = lattice();
    const CellValues m{eta - bm, 0, 0, bm}, c{eta - bc, 0, 0, bc}, p{eta - bp, 0, 0, bp};
    for (Limiter l : {Limiter::minmod, Limiter::superbee, Limiter::monotonized_central}) {
      const CellFaces f = reconstruct_cell(m, c, p, 1e-6, l);
      EXPECT_EQ(f.lo.eta, eta);
      EXPECT_EQ(f.hi.eta, eta);
      EXPECT_EQ(f.eta_slope, 0.0);
    }
  }
}

TEST(ReconstructCell, DryCellSitsAtBed) {
  const CellValues m{1.0, 0.5, 0, 0}, c{0.0, 0.0, 0, 0.7}, p{1.0, 0, 0, 0};
  const CellFaces f = reconstruct_cell(m, c, p, 1e-6, Limiter::minmod);
  EXPECT_EQ(f.lo.H, 0.0);
  EXPECT_EQ(f.hi.u, 0.0);
  EXPECT_EQ(f.hi.b, 0.7);
  EXPECT_EQ(f.hi.eta, 0.7);
}

TEST(ReconstructCell, DryNeighbourFallsBackToConstant) {
  const CellValues m{0.0, 0, 0, 0}, c{1.0, 0.4, 0, 0}, p{2.0, 0, 0, 0};
  const CellFaces f = reconstruct_cell(m, c, p, 1e-6, Limiter::minmod);
  EXPECT_EQ(f.lo.H, 1.0);
  EXPECT_EQ(f.hi.H, 1.0);
  EXPECT_EQ(f.hi.u, 0.4);
  EXPECT_EQ(f.eta_slope, 0.0);
}

TEST(Reconstruct, LakeAtRestFacesMatch) {
  const SimGrid g{12, 9, 1.0};
  Field bed(12, 9);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.0, 0.8);
  for (std::size_t k = 0; k < bed.size(); ++k) bed[k] = d(rng);
  const FlowState s = new_state(g, bed, ConstantSurface{1.0});
  for (Axis a : {Axis::x, Axis::y}) {
    const FaceStates f = reconstruct(s, a);
    for (std::size_t k = 0; k < f.left.size(); ++k) {
      EXPECT_EQ(f.left[k].eta, f.right[k].eta);
      EXPECT_EQ(f.left[k].eta, 1.0);
    }
  }
}

TEST(Reconstruct, FaceArrayShapes) {
  const SimGrid g{7, 5, 1.0};
  const FlowState s = new_state(g, Field(7, 5, 0.0), ConstantSurface{1.0});
  EXPECT_TRUE(reconstruct(s, Axis::x).left.same_shape(6, 5));
  EXPECT_TRUE(reconstruct(s, Axis::y).right.same_shape(7, 4));
}

}  // namespace
}  // namespace swsed
