// Compiled with -mavx2 only (no -mfma) so that mul/add stay separate and the
// results match the scalar kernels bit for bit.

#include <immintrin.h>

#include <limits>

#include "cechlab/simd/distance_kernels.hpp"

namespace cechlab::simd {

namespace {

inline __m256d sqdist4(const double* const* cols, std::size_t dim, std::size_t i, const double* q) {
  __m256d s = _mm256_setzero_pd();
  for (std::size_t c = 0; c < dim; ++c) {
    const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(cols[c] + i), _mm256_set1_pd(q[c]));
    s = _mm256_add_pd(s, _mm256_mul_pd(t, t));
  }
  return s;
}

inline double sqdist1(const double* const* cols, std::size_t dim, std::size_t i, const double* q) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double t = cols[c][i] - q[c];
    s += t * t;
  }
  return s;
}

void squared_distances(const double* const* cols, std::size_t dim, std::size_t count,
                       const double* query, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) _mm256_storeu_pd(out + i, sqdist4(cols, dim, i, query));
  for (; i < count; ++i) out[i] = sqdist1(cols, dim, i, query);
}

std::size_t collect_within(const double* const* cols, std::size_t dim, std::size_t count,
                           const double* query, double r2, std::uint32_t* out) {
  const __m256d limit = _mm256_set1_pd(r2);
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d s = sqdist4(cols, dim, i, query);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(s, limit, _CMP_LE_OQ));
    while (mask) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      out[n++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(lane));
      mask &= mask - 1;
    }
  }
  for (; i < count; ++i)
    if (sqdist1(cols, dim, i, query) <= r2) out[n++] = static_cast<std::uint32_t>(i);
  return n;
}

double min_squared_distance(const double* const* cols, std::size_t dim, std::size_t count,
                            const double* query) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (count >= 4) {
    __m256d m = _mm256_set1_pd(best);
    for (; i + 4 <= count; i += 4) m = _mm256_min_pd(m, sqdist4(cols, dim, i, query));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    for (double v : lanes) best = v < best ? v : best;
  }
  for (; i < count; ++i) {
    const double s = sqdist1(cols, dim, i, query);
    if (s < best) best = s;
  }
  return best;
}

}  // namespace

const DistanceKernels& avx2_kernels() {
  static const DistanceKernels k{&squared_distances, &collect_within, &min_squared_distance};
  return k;
}

}  // namespace cechlab::simd
