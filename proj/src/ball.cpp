#include "abmap/ball.hpp"

#include <algorithm>

namespace abmap {

Ball::Ball(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Ball::Ball(const Quad& value, mpfr_prec_t prec) : Ball(prec) { value.enclose(lo_, hi_); }

Ball::Ball(const Ball& other) : Ball(other.precision()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Ball& Ball::operator=(const Ball& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Ball::~Ball() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Ball::mid() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double out = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return out;
}

double Ball::radius() const {
  mpfr_t r;
  mpfr_init2(r, 64);
  mpfr_sub(r, hi_, lo_, MPFR_RNDU);
  mpfr_div_2ui(r, r, 1, MPFR_RNDU);
  const double out = mpfr_get_d(r, MPFR_RNDU);
  mpfr_clear(r);
  return out;
}

void Ball::mul(const Ball& a, const Ball& b) {
  const mpfr_prec_t prec = precision();
  if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
    // Common case in the dynamics: both factors nonnegative.
    mpfr_t l;
    mpfr_init2(l, prec);
    mpfr_mul(l, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(hi_, a.hi_, b.hi_, MPFR_RNDU);
    mpfr_set(lo_, l, MPFR_RNDD);
    mpfr_clear(l);
    return;
  }
  mpfr_t p[4], q[4];
  const __mpfr_struct* xs[2] = {a.lo_, a.hi_};
  const __mpfr_struct* ys[2] = {b.lo_, b.hi_};
  for (int i = 0; i < 4; ++i) {
    mpfr_init2(p[i], prec);
    mpfr_init2(q[i], prec);
    mpfr_mul(p[i], xs[i / 2], ys[i % 2], MPFR_RNDD);
    mpfr_mul(q[i], xs[i / 2], ys[i % 2], MPFR_RNDU);
  }
  int lo_i = 0;
  int hi_i = 0;
  for (int i = 1; i < 4; ++i) {
    if (mpfr_less_p(p[i], p[lo_i])) lo_i = i;
    if (mpfr_greater_p(q[i], q[hi_i])) hi_i = i;
  }
  mpfr_set(lo_, p[lo_i], MPFR_RNDD);
  mpfr_set(hi_, q[hi_i], MPFR_RNDU);
  for (int i = 0; i < 4; ++i) {
    mpfr_clear(p[i]);
    mpfr_clear(q[i]);
  }
}

void Ball::add(const Ball& a, const Ball& b) {
  mpfr_add(lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(hi_, a.hi_, b.hi_, MPFR_RNDU);
}

void Ball::rsub_si(long n) {
  // n - [lo, hi] = [n - hi, n - lo]
  mpfr_t l;
  mpfr_init2(l, precision());
  mpfr_si_sub(l, n, hi_, MPFR_RNDD);
  mpfr_si_sub(hi_, n, lo_, MPFR_RNDU);
  mpfr_swap(lo_, l);
  mpfr_clear(l);
}

void Ball::sub_si(long n) {
  mpfr_sub_si(lo_, lo_, n, MPFR_RNDD);
  mpfr_sub_si(hi_, hi_, n, MPFR_RNDU);
}

void Ball::clamp_unit() {
  if (mpfr_sgn(lo_) < 0) mpfr_set_zero(lo_, 1);
  if (mpfr_cmp_ui(hi_, 1) > 0) mpfr_set_ui(hi_, 1, MPFR_RNDU);
  if (mpfr_greater_p(lo_, hi_)) mpfr_set(lo_, hi_, MPFR_RNDD);
}

long Ball::floor_lo() const { return mpfr_get_si(lo_, MPFR_RNDD); }
long Ball::floor_hi() const { return mpfr_get_si(hi_, MPFR_RNDD); }
bool Ball::hi_is_integer() const { return mpfr_integer_p(hi_) != 0; }

}  // namespace abmap
