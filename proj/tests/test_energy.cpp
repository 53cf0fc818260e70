#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "helix/helix.hpp"

using namespace helix;

TEST(Potential, VanishesExactlyOnWells) {
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) EXPECT_EQ(eval_W({a, b}), 0.0);
  EXPECT_DOUBLE_EQ(eval_W({0.0, 0.0}), 2.0);
  EXPECT_DOUBLE_EQ(eval_W({1.0, 1.0 - 2.0 * 0.25}), std::pow(1.0 - 0.25, 2));
  EXPECT_DOUBLE_EQ(dist_to_K({0.0, 0.0}), std::sqrt(2.0));
}

TEST(Potential, Sandwich) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 200000; ++k) {
    const Vec2 b{U(rng), U(rng)};
    const double w = eval_W(b), d = dist_to_K(b);
    const double lo = std::max(0.5 * std::pow(d, 4), d * d);
    const double hi = 18.0 * std::max(std::pow(d, 4), d * d);
    ASSERT_LE(lo, w * (1 + 1e-12) + 1e-300) << b.x << " " << b.y;
    ASSERT_LE(w, hi * (1 + 1e-12) + 1e-300) << b.x << " " << b.y;
  }
}

TEST(Phi, MatchesQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  auto g = [](double t) { return std::abs(1.0 - t * t); };
  for (int k = 0; k < 100; ++k) {
    const double t = -3.0 + 6.0 * (k + 0.5) / 100;
    // split at the kinks so the rule sees smooth pieces
    double q = 0.0, a = 0.0;
    const double lo = std::min(0.0, t), hi = std::max(0.0, t);
    double pts[4] = {lo, hi, hi, hi};
    int n = 2;
    for (double c : {-1.0, 1.0})
      if (c > lo && c < hi) pts[n++] = c;
    std::sort(pts, pts + n);
    for (int i = 0; i + 1 < n; ++i) q += gauss_kronrod<double, 31>::integrate(g, pts[i], pts[i + 1], 5, 1e-14);
    a = t >= 0 ? q : -q;
    EXPECT_NEAR(eval_Phi(t), a, 1e-8) << t;
  }
}

TEST(Phi, OddAndMonotone) {
  EXPECT_DOUBLE_EQ(eval_Phi(1.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(eval_Phi(-2.0), -eval_Phi(2.0));
  double prev = eval_Phi(-3.0);
  for (int k = 1; k <= 600; ++k) {
    const double v = eval_Phi(-3.0 + k * 0.01);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Phi, Inequalities) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 200000; ++k) {
    const double x = U(rng), y = U(rng);
    ASSERT_LE(0.125 * (x - y) * (x - y), std::abs(eval_Phi(y) - eval_Phi(x)) * (1 + 1e-12) + 1e-300);
    for (double a : {-1.0, 1.0}) {
      const double d = std::abs(x - a);
      ASSERT_LE(std::abs(eval_Phi(x) - eval_Phi(a)), 4.0 * (d + d * d * d) * (1 + 1e-12));
    }
  }
}

namespace {

VectorField2D two_phase(int n, double theta) {
  // beta_2 jumps from 1 - 2 theta to 1 at x = 1/2
  return VectorField2D::sample(GridSpec(n), [&](Point p) {
    return Vec2{1.0, p.x < 0.5 ? 1.0 - 2.0 * theta : 1.0};
  });
}

} // namespace

TEST(Energy, UniformField) {
  const double theta = 0.3;
  const VectorField2D f(GridSpec(64), Vec2{1.0, 1.0 - 2.0 * theta});
  for (auto k : {EnergyKind::E1, EnergyKind::E2, EnergyKind::EA}) {
    const auto e = energy(k, f, 0.1);
    EXPECT_NEAR(e.bulk, 16.0 * theta * theta * (1 - theta) * (1 - theta), 1e-12);
    EXPECT_EQ(e.regularizer, 0.0);
  }
}

TEST(Energy, StraightInterface) {
  const double theta = 0.25, sigma = 0.1;
  const int n = 64;
  const auto f = two_phase(n, theta);
  // one vertical interface of length 1 and jump 2 theta
  EXPECT_NEAR(energy(EnergyKind::E1, f, sigma).regularizer, sigma * 2 * theta, 1e-12);
  const double h = 1.0 / n;
  // n edges, each (2 theta)^2 / h^2 * h^2
  EXPECT_NEAR(energy(EnergyKind::E2, f, sigma).regularizer, sigma * sigma * n * 4 * theta * theta, 1e-10);
  // anisotropic part only sees d1 beta1 and d2 beta2: both zero here
  EXPECT_EQ(energy(EnergyKind::EA, f, sigma).regularizer, 0.0);
  EXPECT_NEAR(energy(EnergyKind::E1, f, sigma).bulk, 0.5 * std::pow(1 - std::pow(1 - 2 * theta, 2), 2), 1e-12);
  (void)h;
}

TEST(Energy, RegionRestriction) {
  const auto f = two_phase(64, 0.25);
  const auto left = energy(EnergyKind::E1, f, 0.1, Rect{0.0, 0.0, 0.5, 1.0});
  EXPECT_EQ(left.regularizer, 0.0);
  EXPECT_THROW(energy(EnergyKind::E1, f, 0.1, Rect{0.0, 0.0, 1.5, 1.0}), GeometryError);
  EXPECT_THROW(energy(EnergyKind::E1, f, 0.0), ParameterError);
}

TEST(Energy, SliceSeesTheJumpAlongTheSlice) {
  const auto f = two_phase(64, 0.25);
  const double sigma = 0.1;
  const double row = slice_energy(EnergyKind::E1, f, sigma, SliceAxis::horizontal, 0.5, 0.0, 1.0);
  EXPECT_NEAR(row, 0.5 * std::pow(0.75, 2) + sigma * 0.5, 1e-12);
  const double col = slice_energy(EnergyKind::E1, f, sigma, SliceAxis::vertical, 0.25, 0.0, 1.0);
  EXPECT_NEAR(col, std::pow(0.75, 2), 1e-12);
}

TEST(Energy, ParseKinds) {
  EXPECT_EQ(parse_energy_kind("EA"), EnergyKind::EA);
  EXPECT_FALSE(parse_energy_kind("E3"));
}

TEST(Scaling, TermsAndRegimes) {
  const ScalingParams p{0.01, 0.25, 0.001};
  const auto t = scaling_terms(p);
  EXPECT_DOUBLE_EQ(t.uniform, 0.0625);
  EXPECT_NEAR(t.branching, 0.01 * (std::log(100.0) / std::log(4.0) + 1.0), 1e-15);
  EXPECT_NEAR(t.vortex, 0.25 * 1e-6 / 1e-6 + 0.25 * 0.01 * std::log(4.0), 1e-15);
  EXPECT_EQ(t.argmin(), Regime::branching);
  EXPECT_DOUBLE_EQ(scaling_s(p), t.branching);
  const auto alt = scaling_terms(p, VortexLog::log_sigma_over_eps_theta);
  EXPECT_NEAR(alt.vortex, 0.25 + 0.25 * 0.01 * std::log(40.0), 1e-15);
}

TEST(Scaling, Validation) {
  EXPECT_THROW((ScalingParams{0.1, 0.6, 0.001}.validate()), ParameterError);
  EXPECT_THROW((ScalingParams{0.001, 0.25, 0.001}.validate()), ParameterError);
  const double eps = 0.01;
  EXPECT_NO_THROW((ScalingParams{std::sqrt(2.0) * std::numbers::pi * eps, 0.25, eps}.validate()));
}
