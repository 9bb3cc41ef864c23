#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace abmap::simd {

/// Affine branch table for batch stepping: branch i (0-based) maps
/// u = alpha + beta x to s[i] * u + t[i]; w[i] is the observable on cell i+1.
struct StepParams {
  const double* s = nullptr;
  const double* t = nullptr;
  const double* w = nullptr;
  int k = 0;
  double alpha = 0.0;
  double beta = 1.0;
  double jitter = 0.0;  // amplitude of the uniform perturbation added per step
};

struct KernelTable {
  const char* name;
  /// y = A x for a row-major n x n matrix. Rows are summed in four
  /// interleaved partial sums combined as (p0 + p1) + (p2 + p3), then the
  /// tail; every backend uses this order.
  void (*matvec)(const double* a, const double* x, double* y, std::size_t n);
  /// Advances `count` independent samples by `steps` steps. sum[i] gains
  /// w[cell(x_i)] before each step; rng[i] is a xorshift64 state.
  void (*advance)(const StepParams& p, double* x, std::uint64_t* rng, double* sum, std::size_t count, int steps);
};

const KernelTable& scalar_kernels();
/// nullptr when the CPU lacks AVX2 or the build has no AVX2 unit.
const KernelTable* avx2_kernels();
/// AVX2 when available unless ABMAP_SIMD=scalar is set.
const KernelTable& kernels();

inline std::uint64_t xorshift64(std::uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

/// Uniform double in [0, 1) from the top 52 bits.
inline double unit_from_bits(std::uint64_t r) {
  const std::uint64_t bits = (r >> 12) | 0x3FF0000000000000ULL;
  double d;
  __builtin_memcpy(&d, &bits, sizeof d);
  return d - 1.0;
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace abmap::simd
