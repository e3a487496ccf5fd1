#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cechlab/point_cloud.hpp"
#include "cechlab/rng.hpp"

namespace cechlab::testing {

inline PointCloud cloud_1d(std::vector<double> xs) { return PointCloud(1, std::move(xs)); }

/// Unit-side equilateral triangle in the plane.
inline PointCloud equilateral_triangle() {
  return PointCloud(2, {0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0});
}

inline PointCloud unit_square() { return PointCloud(2, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0}); }

/// `count` points uniform in [0, scale]^dim.
PointCloud random_cloud(RandomStream& rng, std::size_t count, std::size_t dim, double scale = 1.0);

}  // namespace cechlab::testing
