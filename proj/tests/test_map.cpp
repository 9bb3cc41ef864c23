#include <cmath>

#include "abmap/coding.hpp"
#include "abmap/error.hpp"
#include "abmap/expr.hpp"
#include "abmap/map.hpp"
#include "doctest.h"

using namespace abmap;

namespace {

const char* kGolden = "(1+sqrt(5))/2";

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an abmap::Error");
  return ErrorCode::ConfigInvalid;
}

Quad two_pow(int e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Quad(mpq_class(1, 1) / mpq_class(p)) : Quad(mpq_class(p));
}

}  // namespace

TEST_CASE("quadratic field arithmetic") {
  const Quad phi = parse_real(kGolden);
  CHECK(phi * phi == phi + Quad(1));
  CHECK((Quad(1) / phi) == phi - Quad(1));
  CHECK(phi.floor() == 1);
  CHECK(phi.ceil() == 2);
  CHECK(std::abs(phi.to_double() - 1.6180339887498949) < 1e-15);
  CHECK(parse_real("2.6") == Quad(mpq_class(13, 5)));
  CHECK(parse_real("1e-3") == Quad(mpq_class(1, 1000)));
  CHECK(parse_real("root(1,-1,-1)") == phi);
  CHECK(parse_real("sqrt(8)") == Quad(2) * parse_real("sqrt(2)"));
  CHECK(parse_real("sqrt(9/4)") == Quad(mpq_class(3, 2)));
  CHECK(code_of([] { parse_real("sqrt(2)+sqrt(3)"); }) == ErrorCode::FieldMismatch);
  CHECK(code_of([] { parse_real("2.x"); }) == ErrorCode::ParseError);
  // Sign of a + b sqrt(d) with cancellation.
  const Quad tiny = parse_real("sqrt(2)") - Quad(mpq_class(665857, 470832));
  CHECK(tiny.sign() < 0);  // 665857/470832 overshoots sqrt(2) by about 1.6e-12
  CHECK((-tiny).sign() > 0);
}

TEST_CASE("build_map") {
  MapParams m = build_map("0", "2", "++");
  CHECK(m.k == 2);
  CHECK(m.c(1) == Quad(mpq_class(1, 2)));
  m = build_map("0.5", "2", "+-+");
  CHECK(m.k == 3);
  CHECK(m.c(1) == Quad(mpq_class(1, 4)));
  CHECK(m.c(2) == Quad(mpq_class(3, 4)));
  CHECK(code_of([] { build_map("0", "0.9", "+"); }) == ErrorCode::BetaOutOfRange);
  CHECK(code_of([] { build_map("1", "2", "++"); }) == ErrorCode::AlphaOutOfRange);
  CHECK(code_of([] { build_map("0", "2", "+++"); }) == ErrorCode::SignLengthMismatch);
  // Branch lengths: beta*(c_i - c_{i-1}) <= 1 with equality inside.
  m = build_map("0.3", "2.6", "+-+");
  for (int i = 1; i <= m.k; ++i) {
    const Quad len = m.beta * (m.c(i) - m.c(i - 1));
    CHECK(len <= Quad(1));
    if (i > 1 && i < m.k) CHECK(len == Quad(1));
  }
}

TEST_CASE("eval") {
  const MapParams dbl = build_map("0", "2", "++");
  auto e = eval(dbl, parse_real("0.3"));
  CHECK(e.y == parse_real("0.6"));
  CHECK(e.branch == 1);
  const MapParams m = build_map("0.5", "2", "+-+");
  e = eval(m, parse_real("0.5"));
  CHECK(e.y == parse_real("0.5"));
  CHECK(e.branch == 2);
  const MapParams tent = build_map("0", "2", "+-");
  e = eval(tent, Quad(1));
  CHECK(e.y == Quad(0));
  CHECK(e.branch == 2);
  // Half-open cells: c_1 belongs to the right branch.
  CHECK(eval(dbl, parse_real("1/2")).branch == 2);
}

TEST_CASE("eval_sided") {
  const MapParams dbl = build_map("0", "2", "++");
  auto s = eval_sided(dbl, {Quad(0), Side::Right});
  CHECK(s.q == SidedPoint{Quad(0), Side::Right});
  CHECK(s.symbol == 1);
  const MapParams tent = build_map("0", "2", "+-");
  s = eval_sided(tent, {Quad(1), Side::Left});
  CHECK(s.q == SidedPoint{Quad(0), Side::Right});
  CHECK(s.symbol == 2);
  const MapParams golden = build_map("0", kGolden, "++");
  s = eval_sided(golden, {Quad(1), Side::Left});
  CHECK(s.q == SidedPoint{Quad(1) / golden.beta, Side::Left});
  CHECK(s.symbol == 2);
  CHECK(code_of([&] { eval_sided(dbl, {Quad(0), Side::Left}); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("sided orbit agrees with nearby points") {
  // Oracle: orbit of x -/+ 2^-128 computed exactly, compared symbol by symbol
  // and side by side with the sided chain for as long as beta^n 2^-128 stays small.
  const char* fixtures[][3] = {{"0", "2", "+-"},       {"0.3", "2.6", "+-+"}, {"0", kGolden, "++"},
                               {"0.25", "2.5", "-+-"}, {"0", "1.8", "--"},    {"0.4", "1.7", "+++"}};
  for (auto& f : fixtures) {
    const MapParams m = build_map(f[0], f[1], f[2]);
    const Quad delta = two_pow(-128);
    std::vector<SidedPoint> starts = {{Quad(0), Side::Right}, {Quad(1), Side::Left}};
    for (int i = 1; i < m.k; ++i) {
      starts.push_back({m.c(i), Side::Left});
      starts.push_back({m.c(i), Side::Right});
    }
    for (const SidedPoint& p0 : starts) {
      const Quad x0 = p0.side == Side::Right ? p0.value + delta : p0.value - delta;
      SidedPoint p = p0;
      Quad x = x0;
      int flips = 0;
      const int steps = static_cast<int>(100.0 / std::log2(m.beta_d));
      for (int t = 0; t < steps; ++t) {
        const auto s = eval_sided(m, p);
        const auto e = eval(m, x);
        REQUIRE(s.symbol == e.branch);
        if (m.sign(s.symbol) < 0) ++flips;
        p = s.q;
        x = e.y;
        // x stays on the tracked side of p.
        if (p.side == Side::Right) {
          CHECK(x > p.value);
        } else {
          CHECK(x < p.value);
        }
        CHECK((p.side != p0.side) == (flips % 2 == 1));
      }
    }
  }
}

TEST_CASE("orbit") {
  const MapParams dbl = build_map("0", "2", "++");
  OrbitResult r = orbit(dbl, parse_real("1/3"), 3);
  REQUIRE(r.values.size() == 4);
  CHECK(r.values[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r.values[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(r.values[3] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(r.max_radius < 1e-60);
  CHECK(orbit(dbl, parse_real("0.7"), 0).values.size() == 1);

  // Closed last cell: T(1/beta) = 0 for the golden map, so the orbit of 1
  // is (1, 1/beta, 0). The sided chain from 1- gives (1, 1/beta-, 1-).
  const MapParams golden = build_map("0", kGolden, "++");
  r = orbit(golden, Quad(1), 2);
  CHECK(r.exact);
  CHECK(r.values[1] == doctest::Approx(1 / golden.beta_d).epsilon(1e-15));
  CHECK(r.values[2] == 0.0);
  const auto ex = orbit_exact(golden, Quad(1), 2);
  CHECK(ex[2] == Quad(0));
  CHECK(sided_itinerary(golden, {Quad(1), Side::Left}, 3) == Word{2, 1, 2});

  OrbitOptions strict;
  strict.exact_fallback = false;
  strict.max_precision_bits = 512;
  CHECK(code_of([&] { orbit(golden, Quad(1), 2, strict); }) == ErrorCode::PrecisionExhausted);

  // Constant slope on a branch.
  const MapParams m = build_map("0.3", "2.6", "+-+");
  const Quad x = parse_real("0.1"), y = parse_real("0.11");
  CHECK((eval(m, x).y - eval(m, y).y).abs() == m.beta * (x - y).abs());
}

TEST_CASE("itinerary") {
  const MapParams dbl = build_map("0", "2", "++");
  CHECK(itinerary(dbl, parse_real("1/3"), 4).word == Word{1, 2, 1, 2});
  CHECK(code_of([&] { itinerary(dbl, parse_real("1/2"), 1); }) == ErrorCode::AmbiguousCoding);
  const MapParams golden = build_map("0", kGolden, "++");
  // T(1/beta^2) = 1/beta = c_1 exactly, so the point is outside X_T.
  const Quad x = Quad(1) / (golden.beta * golden.beta);
  CHECK(code_of([&] { itinerary(golden, x, 3); }) == ErrorCode::AmbiguousCoding);
  CHECK(itinerary(golden, x, 1).word == Word{1});
  // The right-sided limit at 1/beta^2 codes as 1 1 2 ...
  CHECK(sided_itinerary(golden, {x, Side::Left}, 3) == Word{1, 1, 2});
  // Precision-limited run returns the certified prefix.
  OrbitOptions o;
  o.exact_fallback = false;
  o.escalate = false;
  o.partial_ok = true;
  const Itinerary part = itinerary(dbl, parse_real("1/3"), 400, o);
  CHECK_FALSE(part.exact);
  CHECK(part.word.size() < 400);
  CHECK(part.word.size() > 200);
}

TEST_CASE("itinerary shift consistency") {
  const MapParams m = build_map("0.3", "2.6", "+-+");
  for (int i = 1; i < 20; ++i) {
    const Quad x = Quad(mpq_class(i * 37 % 101, 101));
    const Itinerary a = itinerary(m, x, 30);
    const Itinerary b = itinerary(m, eval(m, x).y, 29);
    CHECK(Word(a.word.begin() + 1, a.word.end()) == b.word);
  }
}

TEST_CASE("kneading sequences") {
  const MapParams dbl = build_map("0", "2", "++");
  KneadingData kd = kneading_sequences(dbl, 16);
  CHECK(kd.a == Word(16, 1));
  CHECK(kd.b == Word(16, 2));
  const MapParams golden = build_map("0", kGolden, "++", 256);
  kd = kneading_sequences(golden, 64);
  for (int t = 0; t < 64; ++t) CHECK(kd.b[static_cast<std::size_t>(t)] == (t % 2 == 0 ? 2 : 1));
  const MapParams tent = build_map("0", "2", "+-");
  kd = kneading_sequences(tent, 8);
  CHECK(kd.b == Word{2, 1, 1, 1, 1, 1, 1, 1});

  // First symbols, adj pairing and shifted tails in {a, b}.
  const MapParams m = build_map("0.3", "2.6", "+-+");
  kd = kneading_sequences(m, 64);
  for (int i = 1; i < m.k; ++i) {
    const auto& r = kd.crit_right[static_cast<std::size_t>(i)];
    const auto& l = kd.crit_left[static_cast<std::size_t>(i)];
    CHECK(r[0] == i + 1);
    CHECK(l[0] == i);
    CHECK(&adj(kd, i, Side::Right) == &l);
    CHECK(&adj(kd, i, Side::Left) == &r);
    for (const auto* seq : {&r, &l}) {
      const Word tail(seq->begin() + 1, seq->end());
      const bool is_a = tail == Word(kd.a.begin(), kd.a.end() - 1);
      const bool is_b = tail == Word(kd.b.begin(), kd.b.end() - 1);
      CHECK((is_a || is_b));
    }
  }
}

TEST_CASE("followers") {
  const MapParams dbl = build_map("0", "2", "++");
  CHECK(followers(dbl, {1, 2, 1}) == std::vector<int>{1, 2});
  const MapParams golden = build_map("0", kGolden, "++");
  CHECK(followers(golden, {2}) == std::vector<int>{1});
  CHECK(followers(golden, {2, 1}) == std::vector<int>{1, 2});
  CHECK(code_of([&] { followers(golden, {2, 2}); }) == ErrorCode::NotInLanguage);
  CHECK(code_of([&] { followers(golden, {1, 1, 1}, 2); }) == ErrorCode::DepthExceeded);
}
