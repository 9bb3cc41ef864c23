#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>

namespace abmap {

/// Exact element a + b*sqrt(d) of a real quadratic field (d squarefree > 1),
/// or a plain rational when d == 0. Mixing two different radicands throws
/// FieldMismatch; mixing a rational with anything is always allowed.
class Quad {
 public:
  Quad() = default;
  Quad(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Quad(mpq_class rational) : a_(std::move(rational)) { a_.canonicalize(); }
  Quad(mpq_class rational, mpq_class irrational, long radicand);

  /// Exact conversion of a finite double.
  static Quad from_double(double v);
  /// sqrt(n) for a nonnegative integer n, reduced to f*sqrt(d).
  static Quad sqrt_of(long n);

  const mpq_class& rational_part() const noexcept { return a_; }
  const mpq_class& irrational_part() const noexcept { return b_; }
  long radicand() const noexcept { return b_ == 0 ? 0 : d_; }
  bool is_rational() const noexcept { return b_ == 0; }

  int sign() const;
  Quad abs() const { return sign() < 0 ? -*this : *this; }
  /// Greatest integer <= value, exact.
  long floor() const;
  /// Least integer >= value, exact.
  long ceil() const;

  double to_double() const;
  /// Encloses the value in [lo, hi] at the precision already set on lo/hi.
  void enclose(mpfr_t lo, mpfr_t hi) const;
  /// Rounded value at the precision of out.
  void to_mpfr(mpfr_t out, mpfr_rnd_t rnd) const;

  /// Canonical text: "p/q", or "p/q+r/s*sqrt(d)".
  std::string str() const;

  Quad operator-() const;
  Quad& operator+=(const Quad& o);
  Quad& operator-=(const Quad& o);
  Quad& operator*=(const Quad& o);
  Quad& operator/=(const Quad& o);

  friend Quad operator+(Quad x, const Quad& y) { return x += y; }
  friend Quad operator-(Quad x, const Quad& y) { return x -= y; }
  friend Quad operator*(Quad x, const Quad& y) { return x *= y; }
  friend Quad operator/(Quad x, const Quad& y) { return x /= y; }

  friend bool operator==(const Quad& x, const Quad& y);
  friend std::strong_ordering operator<=>(const Quad& x, const Quad& y);

 private:
  long join(const Quad& o) const;

  mpq_class a_{0};
  mpq_class b_{0};
  long d_ = 0;
};

}  // namespace abmap
