#pragma once

#include <cstddef>

#include "cechlab/density.hpp"
#include "cechlab/point_cloud.hpp"
#include "cechlab/rng.hpp"

namespace cechlab {

/// Binomial process: exactly `count` i.i.d. points with density f.
PointCloud sample_binomial(std::size_t count, const Density& f, RandomStream& rng);

/// Poisson process with intensity x -> intensity * f(x): a Poisson(intensity)
/// cardinality followed by that many i.i.d. points.
PointCloud sample_poisson(double intensity, const Density& f, RandomStream& rng);

/// Uniform point in the open ball of the given radius around the origin.
void sample_in_ball(RandomStream& rng, double radius, std::span<double> out);

double unit_ball_volume(std::size_t dim);

}  // namespace cechlab
