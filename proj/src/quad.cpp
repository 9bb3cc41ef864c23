#include "abmap/quad.hpp"

#include <cmath>
#include <sstream>

#include "abmap/error.hpp"

namespace abmap {

namespace {

int sign_of(const mpq_class& q) { return mpq_sgn(q.get_mpq_t()); }

}  // namespace

Quad::Quad(mpq_class rational, mpq_class irrational, long radicand)
    : a_(std::move(rational)), b_(std::move(irrational)), d_(radicand) {
  a_.canonicalize();
  b_.canonicalize();
  if (b_ != 0 && d_ <= 1) throw Error(ErrorCode::ParseError, "radicand must be a squarefree integer > 1");
  if (b_ == 0) d_ = 0;
}

Quad Quad::from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite value");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), v);
  return Quad(q);
}

Quad Quad::sqrt_of(long n) {
  if (n < 0) throw Error(ErrorCode::ParseError, "sqrt of a negative integer");
  long f = 1;
  long d = n;
  for (long p = 2; p * p <= d; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      f *= p;
    }
  }
  if (d == 1 || d == 0) return Quad(mpq_class(f * d == 0 ? 0 : f));
  return Quad(mpq_class(0), mpq_class(f), d);
}

long Quad::join(const Quad& o) const {
  const long d1 = radicand();
  const long d2 = o.radicand();
  if (d1 != 0 && d2 != 0 && d1 != d2) {
    throw Error(ErrorCode::FieldMismatch,
                "sqrt(" + std::to_string(d1) + ") and sqrt(" + std::to_string(d2) + ") in one expression");
  }
  return d1 != 0 ? d1 : d2;
}

int Quad::sign() const {
  const int sa = sign_of(a_);
  const int sb = sign_of(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 against b^2 d.
  const mpq_class lhs = a_ * a_;
  const mpq_class rhs = b_ * b_ * d_;
  const int c = cmp(lhs, rhs);
  return c > 0 ? sa : sb;
}

long Quad::floor() const {
  long guess = static_cast<long>(std::floor(to_double()));
  // to_double is accurate to a few ulps; settle the boundary exactly.
  while ((*this - Quad(guess)).sign() < 0) --guess;
  while ((*this - Quad(guess + 1)).sign() >= 0) ++guess;
  return guess;
}

long Quad::ceil() const {
  long guess = static_cast<long>(std::ceil(to_double()));
  while ((*this - Quad(guess)).sign() > 0) ++guess;
  while ((*this - Quad(guess - 1)).sign() <= 0) --guess;
  return guess;
}

double Quad::to_double() const {
  mpfr_t v;
  mpfr_init2(v, 128);
  to_mpfr(v, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

void Quad::to_mpfr(mpfr_t out, mpfr_rnd_t rnd) const {
  if (b_ == 0) {
    mpfr_set_q(out, a_.get_mpq_t(), rnd);
    return;
  }
  // Guard bits absorb the cancellation in a + b sqrt(d).
  const mpfr_prec_t prec = mpfr_get_prec(out) + 64;
  mpfr_t s, t;
  mpfr_init2(s, prec);
  mpfr_init2(t, prec);
  mpfr_set_si(s, d_, MPFR_RNDN);
  mpfr_sqrt(s, s, MPFR_RNDN);
  mpfr_mul_q(s, s, b_.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(t, a_.get_mpq_t(), MPFR_RNDN);
  mpfr_add(out, s, t, rnd);
  mpfr_clear(s);
  mpfr_clear(t);
}

void Quad::enclose(mpfr_t lo, mpfr_t hi) const {
  if (b_ == 0) {
    mpfr_set_q(lo, a_.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi, a_.get_mpq_t(), MPFR_RNDU);
    return;
  }
  const mpfr_prec_t prec = std::max(mpfr_get_prec(lo), mpfr_get_prec(hi)) + 64;
  mpfr_t rl, rh, al, ah;
  for (auto* v : {rl, rh, al, ah}) mpfr_init2(v, prec);
  mpfr_set_si(rl, d_, MPFR_RNDD);
  mpfr_sqrt(rl, rl, MPFR_RNDD);
  mpfr_set_si(rh, d_, MPFR_RNDU);
  mpfr_sqrt(rh, rh, MPFR_RNDU);
  if (sign_of(b_) > 0) {
    mpfr_mul_q(rl, rl, b_.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(rh, rh, b_.get_mpq_t(), MPFR_RNDU);
  } else {
    // b < 0 reverses the order of the sqrt bounds.
    mpfr_swap(rl, rh);
    mpfr_mul_q(rl, rl, b_.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(rh, rh, b_.get_mpq_t(), MPFR_RNDU);
  }
  mpfr_set_q(al, a_.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(ah, a_.get_mpq_t(), MPFR_RNDU);
  mpfr_add(lo, rl, al, MPFR_RNDD);
  mpfr_add(hi, rh, ah, MPFR_RNDU);
  for (auto* v : {rl, rh, al, ah}) mpfr_clear(v);
}

std::string Quad::str() const {
  std::ostringstream os;
  os << a_.get_str();
  if (b_ != 0) {
    os << (sign_of(b_) > 0 ? "+" : "-");
    const mpq_class mag = ::abs(b_);
    if (mag != 1) os << mag.get_str() << "*";
    os << "sqrt(" << d_ << ")";
  }
  return os.str();
}

Quad Quad::operator-() const {
  Quad out = *this;
  out.a_ = -a_;
  out.b_ = -b_;
  return out;
}

Quad& Quad::operator+=(const Quad& o) {
  d_ = join(o);
  a_ += o.a_;
  b_ += o.b_;
  if (b_ == 0) d_ = 0;
  return *this;
}

Quad& Quad::operator-=(const Quad& o) {
  d_ = join(o);
  a_ -= o.a_;
  b_ -= o.b_;
  if (b_ == 0) d_ = 0;
  return *this;
}

Quad& Quad::operator*=(const Quad& o) {
  const long d = join(o);
  if (b_ == 0 && o.b_ == 0) {
    a_ *= o.a_;
    d_ = 0;
    return *this;
  }
  mpq_class na = a_ * o.a_ + b_ * o.b_ * d;
  mpq_class nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  d_ = b_ == 0 ? 0 : d;
  return *this;
}

Quad& Quad::operator/=(const Quad& o) {
  if (o.sign() == 0) throw std::domain_error("Quad division by zero");
  const long d = join(o);
  if (o.b_ == 0) {
    a_ /= o.a_;
    b_ /= o.a_;
    if (b_ == 0) d_ = 0;
    return *this;
  }
  // Multiply by the conjugate: (a + b r)/(c + e r) = (a + b r)(c - e r)/(c^2 - e^2 d).
  const mpq_class norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
  mpq_class na = (a_ * o.a_ - b_ * o.b_ * d) / norm;
  mpq_class nb = (b_ * o.a_ - a_ * o.b_) / norm;
  a_ = std::move(na);
  b_ = std::move(nb);
  d_ = b_ == 0 ? 0 : d;
  return *this;
}

bool operator==(const Quad& x, const Quad& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
}

std::strong_ordering operator<=>(const Quad& x, const Quad& y) {
  const int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace abmap
