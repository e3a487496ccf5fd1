#include <limits>

#include "cechlab/simd/distance_kernels.hpp"

namespace cechlab::simd {

namespace {

inline double sqdist_at(const double* const* cols, std::size_t dim, std::size_t i, const double* q) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double t = cols[c][i] - q[c];
    s += t * t;
  }
  return s;
}

void squared_distances(const double* const* cols, std::size_t dim, std::size_t count,
                       const double* query, double* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = sqdist_at(cols, dim, i, query);
}

std::size_t collect_within(const double* const* cols, std::size_t dim, std::size_t count,
                           const double* query, double r2, std::uint32_t* out) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (sqdist_at(cols, dim, i, query) <= r2) out[n++] = static_cast<std::uint32_t>(i);
  return n;
}

double min_squared_distance(const double* const* cols, std::size_t dim, std::size_t count,
                            const double* query) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double s = sqdist_at(cols, dim, i, query);
    if (s < best) best = s;
  }
  return best;
}

}  // namespace

const DistanceKernels& scalar_kernels() {
  static const DistanceKernels k{&squared_distances, &collect_within, &min_squared_distance};
  return k;
}

}  // namespace cechlab::simd
