#include <cstdlib>
#include <cstring>

#include "abmap/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace abmap::simd {

const KernelTable* avx2_kernels() {
#if defined(ABMAP_HAVE_AVX2)
  static const KernelTable table{"avx2", &matvec_avx2, &advance_avx2};
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("ABMAP_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const KernelTable* v = avx2_kernels();
    return v != nullptr ? v : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace abmap::simd
