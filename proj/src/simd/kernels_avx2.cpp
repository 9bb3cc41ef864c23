#include <immintrin.h>

#include "abmap/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace abmap::simd {

void matvec_avx2(const double* a, const double* x, double* y, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < body; j += 4) {
      const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j));
      acc = _mm256_add_pd(acc, prod);
    }
    alignas(32) double p[4];
    _mm256_store_pd(p, acc);
    double s = (p[0] + p[1]) + (p[2] + p[3]);
    for (std::size_t j = body; j < n; ++j) {
      const double prod = row[j] * x[j];
      s = s + prod;
    }
    y[i] = s;
  }
}

namespace {

inline __m256i xorshift4(__m256i& s) {
  s = _mm256_xor_si256(s, _mm256_slli_epi64(s, 13));
  s = _mm256_xor_si256(s, _mm256_srli_epi64(s, 7));
  s = _mm256_xor_si256(s, _mm256_slli_epi64(s, 17));
  return s;
}

inline __m256d unit4(__m256i r) {
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256i bits = _mm256_or_si256(_mm256_srli_epi64(r, 12), one_bits);
  return _mm256_sub_pd(_mm256_castsi256_pd(bits), _mm256_set1_pd(1.0));
}

}  // namespace

void advance_avx2(const StepParams& p, double* x, std::uint64_t* rng, double* sum, std::size_t count, int steps) {
  const std::size_t body = count & ~std::size_t{3};
  const __m256d alpha = _mm256_set1_pd(p.alpha);
  const __m256d beta = _mm256_set1_pd(p.beta);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d top = _mm256_set1_pd(static_cast<double>(p.k - 1));
  const __m256d jitter = _mm256_set1_pd(p.jitter);
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d si = _mm256_loadu_pd(sum + i);
    __m256i ri = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rng + i));
    for (int n = 0; n < steps; ++n) {
      const __m256d u = _mm256_add_pd(alpha, _mm256_mul_pd(beta, xi));
      const __m256d fi = _mm256_min_pd(_mm256_max_pd(_mm256_floor_pd(u), zero), top);
      const __m128i idx = _mm256_cvttpd_epi32(fi);
      si = _mm256_add_pd(si, _mm256_i32gather_pd(p.w, idx, 8));
      const __m256d su = _mm256_mul_pd(_mm256_i32gather_pd(p.s, idx, 8), u);
      __m256d y = _mm256_add_pd(su, _mm256_i32gather_pd(p.t, idx, 8));
      const __m256d noise = _mm256_mul_pd(_mm256_sub_pd(unit4(xorshift4(ri)), half), jitter);
      y = _mm256_add_pd(y, noise);
      xi = _mm256_min_pd(_mm256_max_pd(y, zero), one);
    }
    _mm256_storeu_pd(x + i, xi);
    _mm256_storeu_pd(sum + i, si);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(rng + i), ri);
  }
  if (body < count) advance_scalar(p, x + body, rng + body, sum + body, count - body, steps);
}

}  // namespace abmap::simd
