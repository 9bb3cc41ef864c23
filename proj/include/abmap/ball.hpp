#pragma once

#include <mpfr.h>

#include "abmap/quad.hpp"

namespace abmap {

/// Closed interval [lo, hi] with MPFR endpoints rounded outward.
class Ball {
 public:
  explicit Ball(mpfr_prec_t prec);
  Ball(const Quad& value, mpfr_prec_t prec);
  Ball(const Ball& other);
  Ball& operator=(const Ball& other);
  ~Ball();

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

  double mid() const;
  double radius() const;

  /// this = a * b
  void mul(const Ball& a, const Ball& b);
  /// this = a + b
  void add(const Ball& a, const Ball& b);
  /// this = n - this
  void rsub_si(long n);
  /// this = this - n
  void sub_si(long n);
  /// Intersect with [0, 1].
  void clamp_unit();

  /// floor(lo) and floor(hi) as integers; both must fit a long.
  long floor_lo() const;
  long floor_hi() const;
  /// True when hi is an exact integer equal to floor_hi.
  bool hi_is_integer() const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace abmap
