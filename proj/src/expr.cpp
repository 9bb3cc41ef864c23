#include "abmap/expr.hpp"

#include <cctype>
#include <string>

#include "abmap/error.hpp"

namespace abmap {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Quad parse() {
    Quad v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Quad expr() {
    Quad v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Quad term() {
    Quad v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        Quad d = factor();
        if (d.sign() == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Quad factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    Quad base = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      bool neg = eat('-');
      skip();
      const std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == digits) {
        pos_ = start;
        fail("expected integer exponent");
      }
      const long e = std::stol(std::string(s_.substr(digits, pos_ - digits)));
      if (e > 4096) fail("exponent too large");
      Quad out(1);
      for (long i = 0; i < e; ++i) out *= base;
      if (neg) {
        if (out.sign() == 0) fail("division by zero");
        out = Quad(1) / out;
      }
      return out;
    }
    return base;
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Quad primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Quad v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string name = ident();
      if (name == "sqrt") {
        expect('(');
        Quad arg = expr();
        expect(')');
        return sqrt_rational(arg);
      }
      if (name == "root") {
        expect('(');
        Quad a = expr();
        expect(',');
        Quad b = expr();
        expect(',');
        Quad cc = expr();
        expect(')');
        return quadratic_root(a, b, cc);
      }
      fail("unknown function '" + name + "'");
    }
    fail("unexpected character");
  }

  Quad number() {
    const std::size_t start = pos_;
    mpz_class mant = 0;
    long scale = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mant = mant * 10 + (s_[pos_++] - '0');
      any = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        mant = mant * 10 + (s_[pos_++] - '0');
        --scale;
        any = true;
      }
    }
    if (!any) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      const std::size_t d0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == d0 || pos_ - d0 > 4) fail("malformed exponent");
      const long e = std::stol(std::string(s_.substr(d0, pos_ - d0)));
      scale += neg ? -e : e;
    }
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class q = scale < 0 ? mpq_class(mant, ten_pow) : mpq_class(mant * ten_pow);
    q.canonicalize();
    return Quad(q);
  }

  Quad sqrt_rational(const Quad& arg) {
    if (!arg.is_rational()) fail("sqrt of an irrational argument");
    const mpq_class& q = arg.rational_part();
    if (q < 0) fail("sqrt of a negative number");
    // sqrt(p/q) = sqrt(p q) / q.
    const mpz_class pq = q.get_num() * q.get_den();
    if (!pq.fits_slong_p()) fail("sqrt argument too large");
    return Quad::sqrt_of(pq.get_si()) / Quad(mpq_class(q.get_den()));
  }

  Quad quadratic_root(const Quad& a, const Quad& b, const Quad& c) {
    if (!a.is_rational() || !b.is_rational() || !c.is_rational()) fail("root() needs rational coefficients");
    if (a.sign() == 0) {
      if (b.sign() == 0) fail("degenerate root()");
      return -c / b;
    }
    const Quad disc = b * b - Quad(4) * a * c;
    if (disc.sign() < 0) fail("root() has no real root");
    Quad r = sqrt_rational(disc);
    if (a.sign() < 0) r = -r;
    return (-b + r) / (Quad(2) * a);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Quad parse_real(std::string_view text) { return Parser(text).parse(); }

}  // namespace abmap
