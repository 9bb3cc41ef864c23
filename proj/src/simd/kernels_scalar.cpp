#include <cmath>

#include "abmap/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace abmap::simd {

// The comparisons below mirror vmaxpd/vminpd: the second operand wins ties.
static inline double max_pd(double a, double b) { return a > b ? a : b; }
static inline double min_pd(double a, double b) { return a < b ? a : b; }

void matvec_scalar(const double* a, const double* x, double* y, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    double p[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < body; j += 4) {
      for (std::size_t l = 0; l < 4; ++l) {
        const double prod = row[j + l] * x[j + l];
        p[l] = p[l] + prod;
      }
    }
    double s = (p[0] + p[1]) + (p[2] + p[3]);
    for (std::size_t j = body; j < n; ++j) {
      const double prod = row[j] * x[j];
      s = s + prod;
    }
    y[i] = s;
  }
}

void advance_scalar(const StepParams& p, double* x, std::uint64_t* rng, double* sum, std::size_t count, int steps) {
  const double top = static_cast<double>(p.k - 1);
  for (std::size_t i = 0; i < count; ++i) {
    double xi = x[i];
    double si = sum[i];
    std::uint64_t ri = rng[i];
    for (int n = 0; n < steps; ++n) {
      const double bx = p.beta * xi;
      const double u = p.alpha + bx;
      const double fi = min_pd(max_pd(std::floor(u), 0.0), top);
      const auto idx = static_cast<std::size_t>(static_cast<int>(fi));
      si = si + p.w[idx];
      const double su = p.s[idx] * u;
      double y = su + p.t[idx];
      const double noise = (unit_from_bits(xorshift64(ri)) - 0.5) * p.jitter;
      y = y + noise;
      xi = min_pd(max_pd(y, 0.0), 1.0);
    }
    x[i] = xi;
    sum[i] = si;
    rng[i] = ri;
  }
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &matvec_scalar, &advance_scalar};
  return table;
}

}  // namespace abmap::simd
