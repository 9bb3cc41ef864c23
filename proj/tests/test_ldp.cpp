#include <cmath>

#include "abmap/error.hpp"
#include "abmap/ldp.hpp"
#include "doctest.h"

using namespace abmap;

namespace {

double binary_rate(double s) { return std::log(2.0) + s * std::log(s) + (1 - s) * std::log(1 - s); }

struct Built {
  MapParams map;
  MarkovDiagram d;
  ComponentReport rep;
};

Built built(const char* alpha, const char* beta, const char* signs, int N) {
  Built b{build_map(alpha, beta, signs), {}, {}};
  const auto kd = kneading_sequences(b.map, N + 2);
  b.d = build_diagram(b.map, cut_times(b.map, kd, N + 1), N);
  b.rep = scc_irreducible(b.d);
  return b;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double x = lo; x <= hi + 1e-12; x += step) g.push_back(x);
  return g;
}

}  // namespace

TEST_CASE("Legendre rate of the full two-shift") {
  auto b = built("0", "2", "++", 5);
  std::vector<double> s;
  for (int i = 1; i <= 9; ++i) s.push_back(i / 10.0);
  s.push_back(-0.1);
  s.push_back(1.2);
  const RateCurve rc = rate_from_pressure(b.d, b.rep.main(), {0.0, 1.0}, grid(-8, 8, 0.5), s);
  CHECK(rc.h_top == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (int i = 0; i < 9; ++i) CHECK(std::fabs(rc.rate[static_cast<std::size_t>(i)] - binary_rate(s[static_cast<std::size_t>(i)])) < 1e-6);
  CHECK(std::fabs(rc.rate[4]) < 1e-9);
  CHECK(std::isinf(rc.rate[9]));
  CHECK(std::isinf(rc.rate[10]));
  // Endpoints on the grid give the exact infimum over the window.
  const RateCurve fine = rate_from_pressure(b.d, b.rep.main(), {0.0, 1.0}, grid(-8, 8, 0.5), grid(0.01, 0.99, 0.01));
  CHECK(window_rate(fine, {0.25, 0.35}) == doctest::Approx(binary_rate(0.35)).epsilon(1e-6));
  CHECK(window_rate(fine, {0.45, 0.55}) == doctest::Approx(0.0));
}

TEST_CASE("rate curve is convex and vanishes at the equilibrium mean") {
  auto b = built("0.3", "2.6", "+-+", 25);
  const std::vector<double> f{0.0, 1.0, 0.5};
  const auto s = grid(0.02, 0.98, 0.02);
  const RateCurve rc = rate_from_pressure(b.d, b.rep.main(), f, grid(-15, 15, 0.25), s);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!std::isfinite(rc.rate[i - 1]) || !std::isfinite(rc.rate[i + 1])) continue;
    CHECK(rc.rate[i - 1] - 2 * rc.rate[i] + rc.rate[i + 1] >= -1e-9);
  }
  for (double r : rc.rate) CHECK(r >= 0.0);
  // The MME mean is P'(0).
  const double h = 1e-5;
  const double mean = (pressure(b.d, b.rep.main(), f, h) - pressure(b.d, b.rep.main(), f, -h)) / (2 * h);
  const auto argmin = std::min_element(rc.rate.begin(), rc.rate.end()) - rc.rate.begin();
  CHECK(std::fabs(s[static_cast<std::size_t>(argmin)] - mean) <= 0.02 + 1e-12);
}

TEST_CASE("Monte-Carlo decay rates on the doubling map") {
  const auto map = build_map("0", "2", "++");
  McOptions o;
  o.samples = 200000;
  o.seed = 9;
  const std::vector<int> ns{16, 32, 64, 128};
  const auto est = mc_deviation_rates(map, {0.0, 1.0}, {{0.45, 0.55}, {0.25, 0.35}, {0.65, 0.75}}, ns, o);
  CHECK(std::fabs(est[0].slope) < 0.01);
  for (std::size_t w = 1; w < 3; ++w) {
    CHECK(est[w].points_used >= 2);
    const double lo = binary_rate(w == 1 ? 0.35 : 0.65);
    CHECK(std::fabs(est[w].slope - lo) < 0.05);
  }
  // Counts are integers summed over blocks, so thread count does not matter.
  McOptions one = o;
  one.threads = 1;
  McOptions three = o;
  three.threads = 3;
  const auto e1 = mc_deviation_rates(map, {0.0, 1.0}, {{0.25, 0.35}}, ns, one);
  const auto e3 = mc_deviation_rates(map, {0.0, 1.0}, {{0.25, 0.35}}, ns, three);
  CHECK(e1[0].count == e3[0].count);
  McOptions scalar = o;
  scalar.samples = 20000;
  scalar.force_scalar = true;
  McOptions fast = scalar;
  fast.force_scalar = false;
  CHECK(mc_deviation_rates(map, {0.0, 1.0}, {{0.3, 0.4}}, ns, scalar)[0].count ==
        mc_deviation_rates(map, {0.0, 1.0}, {{0.3, 0.4}}, ns, fast)[0].count);
}

TEST_CASE("windows outside the observable range") {
  const auto map = build_map("0", "2", "++");
  McOptions o;
  o.samples = 5000;
  try {
    mc_deviation_rate(map, {0.0, 1.0}, {1.5, 2.0}, {8, 16}, o);
    FAIL("expected AllZeroCounts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllZeroCounts);
  }
  CHECK_THROWS_AS(mc_deviation_rate(map, {0.0, 1.0}, {0.2, 0.1}, {8}, o), Error);
  CHECK_THROWS_AS(mc_deviation_rate(map, {0.0, 1.0}, {0.2, 0.3}, {16, 8}, o), Error);
}
