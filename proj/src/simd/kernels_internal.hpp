#pragma once

#include "abmap/simd/kernels.hpp"

namespace abmap::simd {

void matvec_scalar(const double* a, const double* x, double* y, std::size_t n);
void advance_scalar(const StepParams& p, double* x, std::uint64_t* rng, double* sum, std::size_t count, int steps);

#if defined(ABMAP_HAVE_AVX2)
void matvec_avx2(const double* a, const double* x, double* y, std::size_t n);
void advance_avx2(const StepParams& p, double* x, std::uint64_t* rng, double* sum, std::size_t count, int steps);
#endif

}  // namespace abmap::simd
