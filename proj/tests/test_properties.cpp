#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/persistence.hpp"
#include "cechlab/properties.hpp"
#include "cechlab/witness.hpp"
#include "test_support.hpp"

namespace cechlab {
namespace {

using testing::cloud_1d;
using testing::random_cloud;

constexpr double kPi = std::numbers::pi;

std::vector<PropertyDescriptor> builtins(double r) {
  return {iso_graph(SmallGraph::complete(2), r, 2), iso_graph(SmallGraph::path(3), r, 3),
          iso_graph(SmallGraph::complete(3), r, 3), spread(r, 4),
          spread(r, 3),                              conn(r, 2),
          conn(r, 3),                                zeta(r, 3, 1.0, 1),
          zeta(r, 4, 1.3, 1)};
}

// Odd draws: p points in a box of side 1.5 r p. Even draws: a noisy regular
// p-gon with circumradius in [0.8 r, 1.8 r], where spread and zeta fire.
PointCloud random_subset(RandomStream& rng, std::size_t p, double r) {
  if (rng() % 2) return random_cloud(rng, p, 2, 1.5 * r * static_cast<double>(p));
  const double rho = rng.uniform(0.8 * r, 1.8 * r);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  std::vector<double> coords;
  for (std::size_t i = 0; i < p; ++i) {
    const double a = phase + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(p);
    coords.push_back(rho * std::cos(a) + rng.uniform(-0.01, 0.01) * r);
    coords.push_back(rho * std::sin(a) + rng.uniform(-0.01, 0.01) * r);
  }
  return PointCloud(2, std::move(coords));
}

TEST(SmallGraph, Isomorphism) {
  const SmallGraph relabeled_path(4, {{2, 0}, {0, 3}, {3, 1}});
  EXPECT_TRUE(SmallGraph::path(4).isomorphic(relabeled_path));
  EXPECT_FALSE(SmallGraph::path(4).isomorphic(SmallGraph::cycle(4)));
  const SmallGraph star(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_FALSE(star.isomorphic(SmallGraph::path(4)));
  EXPECT_TRUE(SmallGraph::cycle(5).isomorphic(SmallGraph(5, {{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 0}})));
  EXPECT_FALSE(SmallGraph(4, {{0, 1}, {2, 3}}).connected());
  EXPECT_THROW(SmallGraph(9), ArgumentError);
}

TEST(Count, HandEnumeratedExamples) {
  EXPECT_EQ(count_property(iso_graph(SmallGraph::complete(2), 1.0, 2), cloud_1d({0, 1, 3})), 1u);
  EXPECT_EQ(count_property(conn(1.0, 4), cloud_1d({0, 1, 3})), 0u);
  EXPECT_EQ(count_property(conn(0.6, 2), cloud_1d({0, 1, 10})), 1u);
}

TEST(SubsetCount, HandEnumeratedExamples) {
  EXPECT_EQ(subset_count(comp(0.6, 2), cloud_1d({0, 1, 10})), 1u);
  // Point 3 sits exactly 2r from point 1: not separated.
  EXPECT_EQ(subset_count(comp(1.0, 2), cloud_1d({0, 1, 3})), 0u);
  EXPECT_EQ(subset_count(comp(1.0, 2), cloud_1d({0, 1, 3.0001})), 1u);
  EXPECT_EQ(subset_count(upsilon(0.1, 3, 1.0, 1), cloud_1d({0, 5, 10, 15})), 0u);
}

TEST(ComponentCount, HandEnumeratedExamples) {
  EXPECT_EQ(component_count(SmallGraph::complete(2), cloud_1d({0, 1, 5, 6, 20}), 1.2), 2u);
  EXPECT_EQ(component_count(SmallGraph::complete(3), cloud_1d({0, 5, 10}), 1.0), 0u);
  EXPECT_EQ(component_count(SmallGraph::path(3), cloud_1d({0, 1, 2, 50}), 1.1), 1u);
  EXPECT_THROW(component_count(SmallGraph(3, {{0, 1}}), cloud_1d({0, 1}), 1.0), ArgumentError);
}

TEST(Descriptors, NonLocalCustomPropertyIsRejected) {
  auto any_pair = [](const PointCloud&, double) { return true; };
  EXPECT_THROW(custom_property("all-pairs", 2, 1.0, 1.0, any_pair), ArgumentError);
  EXPECT_THROW(custom_property("bad-C", 2, 1.0, INFINITY, any_pair), ArgumentError);
  auto close_pair = [](const PointCloud& y, double r) { return y.distance(0, 1) <= r; };
  EXPECT_NO_THROW(custom_property("close-pair", 2, 1.0, 1.0, close_pair));
}

TEST(Descriptors, SpreadOfTwoPointsIsEmpty) {
  // Needs 2r < |y0 - y1| <= 2r.
  EXPECT_FALSE(spread(1.0, 2)(cloud_1d({0.0, 2.0})));
  EXPECT_FALSE(spread(1.0, 2)(cloud_1d({0.0, 2.0000001})));
  EXPECT_TRUE(spread(1.0, 3)(PointCloud(2, {0.0, 0.0, 2.5, 0.0, 1.25, 2.5 * std::sqrt(3.0) / 2})));
}

TEST(Descriptors, Finiteness) {
  RandomStream rng(1);
  for (const auto& g : builtins(0.3)) {
    for (std::size_t size = 1; size <= 5; ++size) {
      if (size == g.arity) continue;
      EXPECT_FALSE(g(random_subset(rng, size, 0.3))) << g.name;
    }
  }
}

TEST(Descriptors, TranslationInvariance) {
  RandomStream rng(2);
  for (const auto& g : builtins(0.3)) {
    int ones = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto y = random_subset(rng, g.arity, 0.3);
      const std::vector<double> t{rng.uniform(-50, 50), rng.uniform(-50, 50)};
      const bool v = g(y);
      ones += v;
      EXPECT_EQ(v, g(y.translated(t))) << g.name;
    }
    EXPECT_GT(ones, 0) << g.name << " never fired; the check is vacuous";
  }
}

TEST(Descriptors, ScalingEquivariance) {
  RandomStream rng(3);
  for (const auto& g : builtins(0.3)) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto y = random_subset(rng, g.arity, 0.3);
      const double lambda = rng.uniform(0.1, 10.0);
      EXPECT_EQ(g(y), g.at_scale(0.3 * lambda)(y.scaled(lambda))) << g.name << " lambda " << lambda;
    }
  }
}

TEST(Descriptors, LocalityHoldsWithDeclaredConstant) {
  RandomStream rng(4);
  for (const auto& g : builtins(0.3)) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto y = random_subset(rng, g.arity, 0.3);
      if (g(y)) {
        EXPECT_LE(y.diameter(), g.locality_radius()) << g.name;
      }
    }
  }
  EXPECT_EQ(conn(1.0, 2).diam_factor, 2.0);
  EXPECT_EQ(iso_graph(SmallGraph::complete(2), 1.0, 2).diam_factor, 1.0);
  EXPECT_EQ(spread(1.0, 2).diam_factor, 1.0);
  EXPECT_EQ(zeta(1.0, 3, 1.5, 1).diam_factor, 3.0);
}

TEST(Descriptors, ConnectedChainNeedsTwiceTheScale) {
  // Three points chained at spacing 2r: connected, diameter 4r > r p = 3r.
  const auto y = cloud_1d({0.0, 2.0, 4.0});
  EXPECT_TRUE(conn(1.0, 3)(y));
  EXPECT_GT(y.diameter(), 1.0 * 1.0 * 3.0);
  EXPECT_LE(y.diameter(), conn(1.0, 3).locality_radius());
}

TEST(Descriptors, UpsilonFactorsIntoSepAndZeta) {
  RandomStream rng(5);
  const double r = 0.05, theta = 1.1;
  const auto h = upsilon(r, 3, theta, 1);
  const auto z = zeta(r, 3, theta, 1);
  const auto s = sep(theta * r);
  int ones = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // Five random points plus a triangle of side 1.95 r, whose cycle lives past theta r.
    auto x = random_cloud(rng, 5, 2, 0.4);
    const double cx = rng.uniform(0.0, 0.4), cy = rng.uniform(0.0, 0.4), side = 1.95 * r;
    x.add_point(std::vector<double>{cx, cy});
    x.add_point(std::vector<double>{cx + side, cy});
    x.add_point(std::vector<double>{cx + side / 2, cy + side * std::sqrt(3.0) / 2});
    const SpatialGrid grid(x, s.reach * s.scale);
    for (Index a = 0; a < 8; ++a)
      for (Index b = a + 1; b < 8; ++b)
        for (Index c = b + 1; c < 8; ++c) {
          const std::vector<Index> y{a, b, c};
          const bool expected = s.kernel({x, grid}, y, s.scale) && z(x.subset(y));
          EXPECT_EQ(h(x, y), expected);
          ones += expected;
        }
  }
  EXPECT_GT(ones, 0);
}

TEST(Enumeration, PrunedEqualsExhaustive) {
  RandomStream rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + trial % 8;  // <= 12
    const auto cloud = random_cloud(rng, n, 2);
    const double r = rng.uniform(0.05, 0.3);
    for (const auto& g : builtins(r))
      EXPECT_EQ(count_property(g, cloud), count_property_exhaustive(g, cloud)) << g.name << " trial " << trial;
    for (const auto& h : {comp(r, 2), comp(r, 3), upsilon(r, 3, 1.0, 1), upsilon(r, 4, 1.2, 1),
                          with_context(iso_graph(SmallGraph::path(3), r, 3), sep(r))})
      EXPECT_EQ(subset_count(h, cloud), subset_count_exhaustive(h, cloud)) << h.name() << " trial " << trial;
  }
}

TEST(Enumeration, SingletonsAndOversizedArity) {
  const auto any_point = custom_property("point", 1, 1.0, 1.0, [](const PointCloud&, double) { return true; });
  EXPECT_EQ(count_property(any_point, cloud_1d({0, 1, 2})), 3u);
  EXPECT_EQ(count_property(conn(1.0, 5), cloud_1d({0, 1, 2})), 0u);
}

TEST(LowerBound, IsolatedPersistentCyclesBoundPersistentBetti) {
  RandomStream rng(7);
  int positive = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto cloud = random_cloud(rng, 40, 2);
    const double r = rng.uniform(0.03, 0.08);
    for (auto [m, theta] : {std::pair<std::size_t, double>{3, 1.0}, {4, 1.2}}) {
      const auto count = subset_count(upsilon(r, m, theta, 1), cloud);
      EXPECT_LE(count, persistent_betti(cloud, r, theta, 1));
      positive += count > 0;
    }
  }
  EXPECT_GT(positive, 0);
}

TEST(Mu, EdgePropertyIsHalfUnitDiskArea) {
  RandomStream rng(8);
  const auto e = estimate_mu(iso_graph(SmallGraph::complete(2), 1.0, 2), Density::unit_cube(2), 200000, rng);
  EXPECT_NEAR(e.value, kPi / 2.0, 3.0 * e.std_error);
  EXPECT_LT(e.std_error, 0.01);
}

TEST(Mu, ConnectedPairIsHalfDiskOfRadiusTwo) {
  RandomStream rng(9);
  const auto e = estimate_mu(conn(1.0, 2), Density::unit_cube(2), 200000, rng);
  EXPECT_NEAR(e.value, 2.0 * kPi, 3.0 * e.std_error);
}

TEST(Mu, ZeroPropertyAndNonUniformDensity) {
  RandomStream rng(10);
  const auto zero = custom_property("zero", 2, 1.0, 1.0, [](const PointCloud&, double) { return false; });
  const auto e = estimate_mu(zero, Density::unit_cube(2), 1000, rng);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
  // f(x) = 2x on [0,1]: int f^2 = 4/3; edge property in 1-d: (1/2)(4/3)(2) = 4/3.
  const auto f = Density::custom({{0.0, 1.0}}, 2.0, [](std::span<const double> x) { return 2.0 * x[0]; });
  const auto g = estimate_mu(iso_graph(SmallGraph::complete(2), 1.0, 2), f, 200000, rng);
  EXPECT_NEAR(g.value, 4.0 / 3.0, 3.0 * g.std_error);
}

TEST(Palm, SingletonsCountThePoints) {
  RandomStream rng(11);
  const auto point = custom_property("point", 1, 1.0, 1.0, [](const PointCloud&, double) { return true; });
  const auto res = palm_check(without_context(point), 50.0, Density::unit_cube(2), 2000, rng);
  EXPECT_TRUE(res.agree);
  EXPECT_DOUBLE_EQ(res.rhs.value, 50.0);
  EXPECT_NEAR(res.lhs.value, 50.0, 4.0 * res.lhs.std_error);
}

TEST(Palm, EdgeCountAgreesAndScaledRhsIsCaught) {
  RandomStream rng(12);
  const auto h = without_context(iso_graph(SmallGraph::complete(2), 0.05, 2));
  const auto res = palm_check(h, 200.0, Density::unit_cube(2), 20000, rng);
  EXPECT_TRUE(res.agree) << res.lhs.value << " vs " << res.rhs.value;
  RandomStream rng2(12);
  PalmOptions doubled;
  doubled.rhs_scale = 2.0;
  EXPECT_FALSE(palm_check(h, 200.0, Density::unit_cube(2), 20000, rng2, doubled).agree);
}

TEST(Palm, ContextPropertyAgrees) {
  RandomStream rng(13);
  const auto res = palm_check(comp(0.03, 2), 200.0, Density::unit_cube(2), 20000, rng);
  EXPECT_TRUE(res.agree) << res.lhs.value << " vs " << res.rhs.value;
}

TEST(Diagnostic, SubcriticalGuard) {
  RandomStream rng(14);
  const auto h = without_context(iso_graph(SmallGraph::complete(2), 1.0, 2));
  EXPECT_THROW(convergence_diagnostic(h, Density::unit_cube(2), {1.0, -0.5}, {100}, 10, rng), ConfigurationError);
  EXPECT_THROW(convergence_diagnostic(h, Density::unit_cube(2), {1.0, -0.6}, {100, 50}, 10, rng),
               ConfigurationError);
}

TEST(Diagnostic, EdgeRatioNearHalfDiskArea) {
  RandomStream rng(15);
  const auto h = without_context(iso_graph(SmallGraph::complete(2), 1.0, 2));
  const auto rows = convergence_diagnostic(h, Density::unit_cube(2), {0.1, -0.6}, {1000, 4000}, 60, rng);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.r, 0.1 * std::pow(row.n, -0.6), 1e-15);
    EXPECT_NEAR(row.ratio, kPi / 2.0, std::max(4.0 * row.ratio_se, 0.05)) << row.n;
  }
  std::ostringstream csv;
  write_diagnostic_csv(csv, rows);
  EXPECT_EQ(csv.str().rfind("n,r,count_mean,count_se,ratio,ratio_se\n", 0), 0u);
}

TEST(Diagnostic, ReproducibleFromSeed) {
  const auto h = comp(1.0, 2);
  RandomStream a(16), b(16);
  std::ostringstream x, y;
  write_diagnostic_csv(x, convergence_diagnostic(h, Density::unit_cube(2), {0.2, -0.6}, {500}, 20, a, 1));
  write_diagnostic_csv(y, convergence_diagnostic(h, Density::unit_cube(2), {0.2, -0.6}, {500}, 20, b, 3));
  EXPECT_EQ(x.str(), y.str());
}

}  // namespace
}  // namespace cechlab
