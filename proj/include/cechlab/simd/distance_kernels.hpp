#pragma once

// Squared-distance kernels over structure-of-arrays point blocks.
//
// Every backend evaluates sum_c (x_c - q_c)^2 in the same order with separate
// multiply and add (no FMA contraction), so all backends are bit-identical to
// the scalar reference. The closed-ball predicate is `squared distance <= r2`.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cechlab::simd {

enum class Backend { Scalar, Avx2 };

/// `cols[c]` points at coordinate c of the first point in the block.
struct DistanceKernels {
  void (*squared_distances)(const double* const* cols, std::size_t dim, std::size_t count,
                            const double* query, double* out);
  /// Writes the block offsets i with squared distance <= r2; returns how many.
  std::size_t (*collect_within)(const double* const* cols, std::size_t dim, std::size_t count,
                                const double* query, double r2, std::uint32_t* out);
  /// Minimum squared distance over the block (+inf for an empty block).
  double (*min_squared_distance)(const double* const* cols, std::size_t dim, std::size_t count,
                                 const double* query);
};

const DistanceKernels& scalar_kernels();
/// Only valid when backend_supported(Backend::Avx2).
const DistanceKernels& avx2_kernels();

bool backend_supported(Backend b);
std::string_view backend_name(Backend b);

/// Active backend: the best supported one unless overridden by the
/// CECHLAB_SIMD environment variable (`scalar` / `avx2`) or set_backend().
Backend active_backend();
void set_backend(Backend b);
const DistanceKernels& kernels();
const DistanceKernels& kernels(Backend b);

}  // namespace cechlab::simd
