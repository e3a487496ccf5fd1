#include <gtest/gtest.h>

#include <cstring>
#include <vector>

#include "cechlab/geometric_graph.hpp"
#include "cechlab/simd/distance_kernels.hpp"
#include "cechlab/spatial_grid.hpp"
#include "test_support.hpp"

namespace cechlab {
namespace {

using simd::Backend;

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!simd::backend_supported(Backend::Avx2)) GTEST_SKIP() << "AVX2 not available";
  }
  void TearDown() override {
    if (simd::backend_supported(Backend::Avx2)) simd::set_backend(Backend::Avx2);
  }
};

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST_F(SimdEquivalence, SquaredDistancesAreBitIdentical) {
  RandomStream rng(1);
  const auto& scalar = simd::kernels(Backend::Scalar);
  const auto& avx2 = simd::kernels(Backend::Avx2);
  for (std::size_t dim = 1; dim <= 9; ++dim) {
    for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 131u}) {
      std::vector<std::vector<double>> cols(dim, std::vector<double>(count));
      for (auto& c : cols)
        for (double& v : c) v = rng.uniform(-1e3, 1e3) * rng.uniform();
      std::vector<const double*> ptrs;
      for (auto& c : cols) ptrs.push_back(c.data());
      std::vector<double> q(dim);
      for (double& v : q) v = rng.uniform(-10, 10);
      std::vector<double> a(count), b(count);
      scalar.squared_distances(ptrs.data(), dim, count, q.data(), a.data());
      avx2.squared_distances(ptrs.data(), dim, count, q.data(), b.data());
      for (std::size_t i = 0; i < count; ++i) ASSERT_TRUE(bit_equal(a[i], b[i])) << dim << " " << i;
      EXPECT_TRUE(bit_equal(scalar.min_squared_distance(ptrs.data(), dim, count, q.data()),
                            avx2.min_squared_distance(ptrs.data(), dim, count, q.data())));

      // Threshold exactly on a computed distance exercises the closed test.
      const double r2 = count ? a[count / 2] : 1.0;
      std::vector<std::uint32_t> ia(count), ib(count);
      const auto na = scalar.collect_within(ptrs.data(), dim, count, q.data(), r2, ia.data());
      const auto nb = avx2.collect_within(ptrs.data(), dim, count, q.data(), r2, ib.data());
      ASSERT_EQ(na, nb);
      for (std::size_t i = 0; i < na; ++i) EXPECT_EQ(ia[i], ib[i]);
      if (count) {
        EXPECT_GE(na, 1u);
      }
    }
  }
}

TEST_F(SimdEquivalence, GeometricGraphIdenticalAcrossBackends) {
  RandomStream rng(2);
  for (std::size_t dim : {1u, 2u, 3u, 5u, 8u}) {
    const auto cloud = testing::random_cloud(rng, 400, dim);
    for (double r : {0.02, 0.15, 0.4}) {
      simd::set_backend(Backend::Scalar);
      const auto a = geometric_graph(cloud, r);
      simd::set_backend(Backend::Avx2);
      const auto b = geometric_graph(cloud, r);
      EXPECT_EQ(a.edges, b.edges);
    }
  }
}

TEST(SimdDispatch, ScalarAlwaysAvailableAndNamed) {
  EXPECT_TRUE(simd::backend_supported(Backend::Scalar));
  EXPECT_EQ(simd::backend_name(Backend::Scalar), "scalar");
  EXPECT_EQ(simd::backend_name(Backend::Avx2), "avx2");
  const auto previous = simd::active_backend();
  simd::set_backend(Backend::Scalar);
  EXPECT_EQ(simd::active_backend(), Backend::Scalar);
  simd::set_backend(previous);
}

TEST(SpatialGrid, WithinMatchesBruteForce) {
  RandomStream rng(3);
  const auto cloud = testing::random_cloud(rng, 500, 3);
  const SpatialGrid grid(cloud, 0.1);
  for (int q = 0; q < 50; ++q) {
    std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<Index> expected;
    for (Index i = 0; i < cloud.size(); ++i)
      if (squared_distance(cloud.point(i), x) <= 0.01) expected.push_back(i);
    EXPECT_EQ(grid.within(x, 0.1), expected);
  }
}

TEST(SpatialGrid, HugeCoordinatesFallBackToBruteForce) {
  const PointCloud cloud(1, {0.0, 1e300, 1e-300});
  const SpatialGrid grid(cloud, 1e-10);
  EXPECT_TRUE(grid.brute_force());
  EXPECT_EQ(grid.within(std::vector<double>{0.0}, 1e-10), (std::vector<Index>{0, 2}));
}

TEST(SpatialGrid, AnyWithinExcluding) {
  const PointCloud cloud(1, {0.0, 1.0, 3.0});
  const SpatialGrid grid(cloud, 2.0);
  const std::vector<Index> self{0};
  EXPECT_TRUE(grid.any_within_excluding(cloud.point(0), 1.0, self));
  const std::vector<Index> both{0, 1};
  EXPECT_FALSE(grid.any_within_excluding(cloud.point(0), 1.0, both));
}

}  // namespace
}  // namespace cechlab
