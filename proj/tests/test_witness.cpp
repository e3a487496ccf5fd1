#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/persistence.hpp"
#include "cechlab/witness.hpp"
#include "test_support.hpp"

namespace cechlab {
namespace {

using testing::equilateral_triangle;
using testing::unit_square;

TEST(Zeta, Examples) {
  EXPECT_TRUE(zeta_indicator(equilateral_triangle(), 0.5, 1.1, 1));
  EXPECT_FALSE(zeta_indicator(equilateral_triangle(), 0.5, 1.2, 1));  // 0.6 > 1/sqrt(3)
  EXPECT_FALSE(zeta_indicator(PointCloud(2, {0, 0, 1, 0}), 0.5, 1.0, 1));
  EXPECT_TRUE(zeta_indicator(unit_square(), 0.55, 1.0, 1));
}

TEST(Zeta, ScaleInvariantUnderPowersOfTwo) {
  RandomStream rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto y = testing::random_cloud(rng, 4, 2);
    const double r = rng.uniform(0.1, 0.6), theta = rng.uniform(1.0, 1.4);
    const bool v = zeta_indicator(y, r, theta, 1);
    EXPECT_EQ(v, zeta_indicator(y.scaled(4.0), 4.0 * r, theta, 1));
    EXPECT_EQ(v, zeta_indicator(y.scaled(0.125), 0.125 * r, theta, 1));
  }
}

TEST(Construct, InradiusOfStandardTriangle) {
  // Barycenter (1/3,1/3,1/3) to edge midpoint (1/2,1/2,0).
  const double d = std::sqrt(2.0 * (1.0 / 6.0) * (1.0 / 6.0) + (1.0 / 9.0));
  EXPECT_NEAR(simplex_inradius(1), d, 1e-15);
  EXPECT_NEAR(simplex_inradius(1), std::sqrt(1.0 / 6.0), 1e-15);
}

TEST(Construct, VerifiesForSeveralTheta) {
  for (double theta : {1.0, 1.2, 1.5, 2.0}) {
    const auto w = construct_witness(1, theta);
    EXPECT_GE(w.verified_rank, 1u);
    EXPECT_EQ(w.points.dim(), 3u);
    EXPECT_NEAR(w.R, std::sqrt(1.0 / 6.0), 1e-12);
    EXPECT_NEAR(w.r, 0.99 * w.R / theta, 1e-15);
    EXPECT_LT(theta * w.r, w.R);
    EXPECT_GE(persistent_betti(w.points, w.r, theta, 1), 1u);
    for (Index i = 0; i < w.points.size(); ++i) {
      const auto p = w.points.point(i);
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
      EXPECT_TRUE(p[0] == 0.0 || p[1] == 0.0 || p[2] == 0.0) << "point off the boundary";
    }
  }
}

TEST(Construct, SubdivisionRoundsFollowTheDiameterRule) {
  // Edge sqrt(2) halves each round; the rule is sqrt(2) / 2^j <= 0.99 sqrt(1/6) / theta.
  for (double theta : {1.0, 1.5, 2.0, 3.0}) {
    const double r = 0.99 * std::sqrt(1.0 / 6.0) / theta;
    std::size_t j = 0;
    while (std::sqrt(2.0) / std::pow(2.0, static_cast<double>(j)) > r) ++j;
    EXPECT_EQ(witness_subdivision_rounds(1, theta), j) << theta;
    EXPECT_EQ(construct_witness(1, theta).points.size(), 3u << j);
  }
}

TEST(Construct, RejectsBadArguments) {
  EXPECT_THROW(construct_witness(1, 0.5), ArgumentError);
  EXPECT_THROW(construct_witness(0, 1.5), ArgumentError);
  EXPECT_THROW(construct_witness(2, 1.0), ArgumentError);  // subdivision too large
}

TEST(Perturbation, Radius) {
  EXPECT_NEAR(perturbation_radius(0.4, 0.2, 1.5), 0.04, 1e-15);
  EXPECT_DOUBLE_EQ(perturbation_radius(0.5, 0.3, 1.0), 0.1);
  const double delta = perturbation_radius(0.4, 0.2, 1.5);
  EXPECT_NEAR((0.4 - delta) / (0.2 + delta), 1.5, 1e-12);
  EXPECT_THROW(perturbation_radius(0.3, 0.2, 1.5), ArgumentError);
}

TEST(Perturbation, EveryCompliantPerturbationKeepsTheCycle) {
  RandomStream rng(2);
  for (double theta : {1.0, 1.2, 1.5, 2.0, 3.0}) {
    const auto w = construct_witness(1, theta);
    EXPECT_EQ(perturb_and_verify(w, rng, 100), 1.0) << theta;
  }
}

TEST(Perturbation, NegativeControlAndVacuousCase) {
  RandomStream rng(3);
  const auto w = construct_witness(1, 1.5);
  const double fraction = perturb_and_verify(w, rng, 50, 10.0);
  std::cout << "[ control ] delta x10 success fraction " << fraction << "\n";
  RecordProperty("delta_x10_fraction", std::to_string(fraction));
  EXPECT_EQ(perturb_and_verify(w, rng, 0), 1.0);
}

TEST(Search, FindsTriangleAtThetaOne) {
  RandomStream rng(4);
  const auto w = search_m(2, 1, 1.0, 3, 2000, rng);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->points.size(), 3u);
  EXPECT_NEAR(w->points.diameter(), 1.0, 1e-12);
  EXPECT_TRUE(zeta_indicator(w->points, w->r, w->theta, 1));
  EXPECT_GE(w->R, w->theta * w->r);
}

TEST(Search, NeverBelowKPlusTwoPoints) {
  RandomStream rng(5);
  for (double theta : {1.0, 1.3})
    EXPECT_FALSE(search_m(2, 1, theta, 2, 5000, rng).has_value());
  EXPECT_FALSE(search_m(3, 2, 1.0, 3, 2000, rng).has_value());
}

TEST(Search, ThreePointsCannotReachThetaOnePointFour) {
  // Max death/birth for three points is 2/sqrt(3) ~ 1.1547 (equilateral).
  RandomStream rng(6);
  EXPECT_FALSE(search_m(2, 1, 1.4, 3, 20000, rng).has_value());
  EXPECT_FALSE(search_m(2, 1, 1.16, 3, 20000, rng).has_value());
}

TEST(Search, RefinementReachesTheSquare) {
  // Four points reach ratio sqrt(2) only near a square; uniform draws almost never land there.
  RandomStream rng(9);
  SearchOptions opts;
  opts.refine_steps = 400;
  const auto w = search_m(2, 1, 1.4, 4, 50, rng, opts);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->r, 0.5 / std::sqrt(2.0), 5e-3);
  EXPECT_GE(w->R, 1.4 * w->r);
  EXPECT_FALSE(search_m(2, 1, 1.4, 3, 50, rng, opts).has_value());
}

TEST(Search, DeterministicAcrossThreadCounts) {
  RandomStream a(7), b(7);
  SearchOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto x = search_m(2, 1, 1.05, 4, 3000, a, one);
  const auto y = search_m(2, 1, 1.05, 4, 3000, b, four);
  ASSERT_TRUE(x && y);
  EXPECT_EQ(x->points, y->points);
  EXPECT_EQ(x->r, y->r);
}

TEST(Bracket, ThetaOneGivesThree) {
  RandomStream rng(8);
  const auto b = bracket_m(2, 1, 1.0, 5, 2000, rng);
  EXPECT_EQ(b.upper, 3u);
  EXPECT_EQ(b.lower_searched, 2u);
  EXPECT_LT(b.lower_searched, b.upper);
}

TEST(UpperBound, FormulaValues) {
  EXPECT_EQ(upper_bound_constant(3, 1, 3), 3u);
  EXPECT_EQ(upper_bound_constant(4, 1, 4), 6u);
  EXPECT_EQ(upper_bound_constant(2, 1, 3), 0u);
  // p = 5, m = 3, k = 1: C(5,3)C(3,2) + C(5,4)C(4,2) + C(5,5)C(5,2) = 30 + 30 + 10.
  EXPECT_EQ(upper_bound_constant(5, 1, 3), 70u);
}

TEST(WitnessIo, RoundTripReverifies) {
  const auto w = construct_witness(1, 1.5);
  std::stringstream s;
  write_witness(s, w);
  const auto back = read_witness(s);
  EXPECT_EQ(back.points, w.points);
  EXPECT_EQ(back.r, w.r);
  EXPECT_EQ(back.R, w.R);
  EXPECT_EQ(back.verified_rank, w.verified_rank);
}

TEST(WitnessIo, TamperedWitnessIsRejected) {
  auto w = construct_witness(1, 1.5);
  w.theta = 3.0;  // cycle dies before 3 r
  std::stringstream s;
  write_witness(s, w);
  EXPECT_THROW(read_witness(s), ArgumentError);
  std::stringstream bad("1 1.5 0.2\n1 1\n0\n");
  EXPECT_THROW(read_witness(bad), ArgumentError);
}

}  // namespace
}  // namespace cechlab
