#include <atomic>
#include <cstdlib>
#include <string>

#include "cechlab/errors.hpp"
#include "cechlab/simd/distance_kernels.hpp"

namespace cechlab::simd {

namespace {

Backend detect() {
  if (const char* env = std::getenv("CECHLAB_SIMD")) {
    const std::string want = env;
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
  }
  return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> b{static_cast<int>(detect())};
  return b;
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(CECHLAB_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

Backend active_backend() { return static_cast<Backend>(selected().load(std::memory_order_relaxed)); }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw ArgumentError("SIMD backend not supported on this CPU: " + std::string(backend_name(b)));
  selected().store(static_cast<int>(b), std::memory_order_relaxed);
}

const DistanceKernels& kernels(Backend b) {
#if defined(CECHLAB_HAVE_AVX2)
  if (b == Backend::Avx2) return avx2_kernels();
#endif
  (void)b;
  return scalar_kernels();
}

const DistanceKernels& kernels() { return kernels(active_backend()); }

}  // namespace cechlab::simd
