#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helix/helix.hpp"

using namespace helix;

namespace {

constexpr double kRel = 1e-9;

bool contained(Point c, double r, const Ball& b) {
  return norm(c - b.center) + r <= b.radius * (1.0 + kRel);
}

std::vector<Ball> random_family(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> pos(0.0, 10.0), rad(0.01, 0.5), sign(-1.0, 1.0);
  std::vector<Ball> out;
  while (static_cast<int>(out.size()) < count) {
    const Ball b{{pos(rng), pos(rng)}, rad(rng), sign(rng) < 0 ? -1.0 : 1.0};
    bool ok = true;
    for (const auto& o : out)
      if (norm(o.center - b.center) <= (o.radius + b.radius) * 1.001) ok = false;
    if (ok) out.push_back(b);
  }
  return out;
}

void check_properties(const std::vector<Ball>& init, double t) {
  const BallFamily fam = grow_balls(init, t);
  // pairwise disjoint closures
  for (std::size_t i = 0; i < fam.balls.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      ASSERT_GT(norm(fam.balls[i].center - fam.balls[j].center),
                (fam.balls[i].radius + fam.balls[j].radius) * (1.0 - kRel));
  // (1)
  double sum = 0.0, charge0 = 0.0, charge = 0.0;
  for (const auto& b : fam.balls) sum += b.radius, charge += b.charge;
  for (const auto& b : init) charge0 += b.charge;
  ASSERT_LE(sum, std::exp(t) * fam.initial_radius_sum * (1.0 + kRel));
  ASSERT_EQ(charge, charge0);
  // (2)
  for (const auto& b : init) {
    bool in = false;
    for (const auto& B : fam.balls) in = in || contained(b.center, b.radius, B);
    ASSERT_TRUE(in);
  }
  // (3) on every recorded snapshot
  for (const auto& snap : fam.history)
    for (const auto& b : snap.balls) {
      int hits = 0;
      for (const auto& B : fam.balls) hits += contained(b.center, std::exp(t - snap.time) * b.radius, B);
      ASSERT_EQ(hits, 1);
    }
  // (4)
  const auto times = merge_times(init, t);
  ASSERT_LE(times.size(), init.size());
  for (std::size_t k = 1; k < times.size(); ++k) ASSERT_LT(times[k - 1], times[k]);
  for (std::size_t k = 0; k + 1 < fam.history.size(); ++k) {
    const auto& snap = fam.history[k];
    const double next = fam.history[k + 1].time;
    const double mid = 0.5 * (snap.time + next);
    const BallFamily at = grow_balls(init, mid);
    ASSERT_EQ(at.balls.size(), snap.balls.size());
    for (std::size_t i = 0; i < at.balls.size(); ++i) {
      ASSERT_NEAR(at.balls[i].radius, std::exp(mid - snap.time) * snap.balls[i].radius,
                  kRel * at.balls[i].radius);
      ASSERT_EQ(at.balls[i].center.x, snap.balls[i].center.x);
      ASSERT_EQ(at.balls[i].center.y, snap.balls[i].center.y);
    }
  }
}

} // namespace

TEST(Balls, SingleBallGrowsExponentially) {
  const auto fam = grow_balls({{{0.3, -0.2}, 0.5, 1.0}}, 2.0);
  ASSERT_EQ(fam.balls.size(), 1u);
  EXPECT_NEAR(fam.balls[0].radius, 0.5 * std::exp(2.0), 1e-12);
  EXPECT_EQ(fam.balls[0].center.x, 0.3);
  EXPECT_TRUE(merge_times({{{0.3, -0.2}, 0.5, 1.0}}, 2.0).empty());
}

TEST(Balls, TwoBallsMergeAtLogTwo) {
  const std::vector<Ball> init{{{0.0, 0.0}, 1.0, 1.0}, {{4.0, 0.0}, 1.0, -1.0}};
  const auto times = merge_times(init, 3.0);
  ASSERT_EQ(times.size(), 1u);
  EXPECT_NEAR(times[0], std::log(2.0), 1e-14);
  // at contact each radius is 2, so the merged radius is 4
  const auto fam = grow_balls(init, 3.0);
  ASSERT_EQ(fam.balls.size(), 1u);
  EXPECT_NEAR(fam.balls[0].center.x, 2.0, 1e-12);
  EXPECT_NEAR(fam.balls[0].radius, 4.0 * std::exp(3.0 - std::log(2.0)), 1e-9);
  EXPECT_EQ(fam.balls[0].charge, 0.0);
}

TEST(Balls, CollinearTripleIsOneClusterEvent) {
  const std::vector<Ball> init{{{0, 0}, 1, 1}, {{4, 0}, 1, 1}, {{8, 0}, 1, 1}};
  const auto fam = grow_balls(init, 1.0);
  ASSERT_EQ(fam.balls.size(), 1u);
  ASSERT_EQ(fam.merge_log.size(), 1u);
  EXPECT_EQ(fam.merge_log[0].merged.size(), 3u);
  EXPECT_NEAR(fam.merge_log[0].time, std::log(2.0), 1e-14);
  EXPECT_NEAR(fam.balls[0].center.x, 4.0, 1e-12);
  EXPECT_EQ(fam.balls[0].charge, 3.0);
}

TEST(Balls, CascadingMerge) {
  // after the first two merge, the big ball swallows the third at once
  const std::vector<Ball> init{{{0, 0}, 1, 1}, {{2.2, 0}, 1, 1}, {{1.1, 2.35}, 0.2, 1}};
  const auto fam = grow_balls(init, 0.2);
  EXPECT_EQ(fam.balls.size(), 1u);
  EXPECT_EQ(merge_times(init, 0.2).size(), 1u);
  check_properties(init, 0.2);
}

TEST(Balls, RejectsOverlapAndBadInput) {
  EXPECT_THROW(grow_balls({{{0, 0}, 1, 0}, {{1.5, 0}, 1, 0}}, 1.0), InputError);
  EXPECT_THROW(grow_balls({{{0, 0}, 0.0, 0}}, 1.0), InputError);
  EXPECT_THROW(grow_balls({{{0, 0}, 1.0, 0}}, -1.0), ParameterError);
  // touching closures merge at time zero
  const auto fam = grow_balls({{{0, 0}, 1, 1}, {{2, 0}, 1, 1}}, 0.0);
  EXPECT_EQ(fam.balls.size(), 1u);
}

TEST(Balls, RandomFamiliesSatisfyAllProperties) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> count(1, 50);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto init = random_family(rng, count(rng));
    SCOPED_TRACE(trial);
    check_properties(init, time(rng));
    if (HasFatalFailure()) return;
  }
}

TEST(Annulus, Bound) {
  EXPECT_EQ(annulus_bound(0.0, 0.1, 1.0, 2.0, 1.0), 0.0);
  EXPECT_NEAR(annulus_bound(0.01, 0.01, 1.0, std::exp(1.0), 1.0), 1e-4, 1e-18);
  EXPECT_NEAR(annulus_bound(0.2, 0.2, 0.1, 0.3, 1.0 / 144), 0.04 * std::log(3.0) / 144, 1e-16);
  EXPECT_THROW(annulus_bound(1.0, 0.1, 2.0, 1.0, 1.0), ParameterError);
}

TEST(Core, RatioOnVortexArray) {
  const ScalingParams p{0.125, 0.5, 0.0125};
  const auto c = build_vortex_array(p, GridSpec(1024));
  const auto r = vortex_core_ratio(c.field, c.measure);
  ASSERT_EQ(r.size(), 8u);
  for (double v : r) EXPECT_GE(v, 5.0 / (64.0 * std::pow(std::numbers::pi, 3)));
  const double lo = *std::min_element(r.begin(), r.end()), hi = *std::max_element(r.begin(), r.end());
  EXPECT_LT(hi / lo, 1.01);
}

TEST(Core, RejectsInadmissibleField) {
  const VectorField2D f(GridSpec(256), Vec2{1.0, 1.0});
  EXPECT_THROW(vortex_core_ratio(f, VorticityMeasure(0.3, 0.1, {{{0.5, 0.5}, 1}})), InputError);
  EXPECT_THROW(vortex_core_ratio(f, VorticityMeasure(0.3, 0.01, {{{0.5, 0.5}, 1}})), GridError);
}

TEST(LowerBound, SingleVortex) {
  const double sigma = 0.2, eps = 0.05;
  const GridSpec g(512);
  const VorticityMeasure mu(sigma, eps, {{{0.5, 0.5}, 1}});
  const VectorField2D f(g, Vec2{1.0, 1.0});
  const Rect inner{0.49, 0.49, 0.51, 0.51};
  const auto rep = vortex_lower_bound(f, mu, inner, Rect::unit(), 1.0);
  EXPECT_EQ(rep.enclosed_charge, sigma);
  EXPECT_NEAR(rep.T, std::log(0.49 / (2 * eps)), 1e-12);
  EXPECT_NEAR(rep.bound, sigma * sigma * std::log(0.49 / (2 * eps)), 1e-12);
  EXPECT_EQ(rep.measured_energy, 0.0);
}

TEST(LowerBound, EdgeCases) {
  const GridSpec g(128);
  const VectorField2D f(g, Vec2{1.0, 1.0});
  const auto rep = vortex_lower_bound(f, VorticityMeasure::empty(0.1, 0.01), Rect{0.4, 0.4, 0.6, 0.6},
                                      Rect::unit(), 1.0);
  EXPECT_EQ(rep.bound, 0.0);
  EXPECT_FALSE(rep.ratio);
  const VorticityMeasure crowded(0.1, 0.2, {{{0.5, 0.5}, 1}});  // d = 2 eps, so T = 0
  EXPECT_THROW(vortex_lower_bound(f, crowded, Rect{0.4, 0.4, 0.6, 0.6}, Rect::unit(), 1.0), GeometryError);
}

TEST(LowerBound, VortexArrayStrip) {
  // atoms at x = 0.5, spacing 0.25
  const ScalingParams p{0.05, 0.1, 0.005};
  const auto c = build_vortex_array(p, GridSpec(1600));
  ASSERT_EQ(c.atoms_in_domain, 4);
  const auto rep = vortex_lower_bound(c.field, c.measure, Rect{0.45, 0.3, 0.55, 0.7}, Rect::unit(), 1.0);
  EXPECT_NEAR(rep.T, std::log(0.3 / (2 * 0.005 * 4)), 1e-12);
  EXPECT_NEAR(rep.enclosed_charge, 2 * p.sigma, 1e-15);
  ASSERT_TRUE(rep.ratio);
  EXPECT_GT(*rep.ratio, 1.0);
}
