#include <random>

#include "abmap/diagram.hpp"
#include "abmap/error.hpp"
#include "abmap/expr.hpp"
#include "doctest.h"

using namespace abmap;

namespace {

const char* kGolden = "(1+sqrt(5))/2";

struct Fixture {
  const char* alpha;
  const char* beta;
  const char* signs;
};

const Fixture kCorpus[] = {
    {"0", "2", "++"},       {"0", kGolden, "++"},   {"0", "2", "+-"},         {"0.3", "2.6", "+-+"},
    {"0", "1.8", "--"},     {"0.4", "1.7", "+++"},  {"0", "3.3", "+-+-"},     {"0", "1+sqrt(2)", "+-+"},
    {"0.25", "2.5", "-+-"},
};

struct Built {
  MapParams map;
  KneadingData kd;
  CutTimes ct;
};

Built build(const Fixture& f, int depth) {
  Built b{build_map(f.alpha, f.beta, f.signs), {}, {}};
  b.kd = kneading_sequences(b.map, depth + 1);
  b.ct = cut_times(b.map, b.kd, depth);
  return b;
}

Word slice(const Word& w, int from, int to) { return Word(w.begin() + from, w.begin() + to); }

}  // namespace

TEST_CASE("cut times on simple fixtures") {
  Built d = build({"0", "2", "++"}, 10);
  for (int m = 0; m <= 10; ++m) CHECK(d.ct.R[static_cast<std::size_t>(m)] == m);
  // Golden map: #S(b_[0,n)) >= 2 exactly at even n.
  Built g = build({"0", kGolden, "++"}, 12);
  CHECK(g.ct.S == std::vector<int>{0, 2, 4, 6, 8, 10, 12});
  for (std::size_t m = 1; m < g.ct.s.size(); ++m) CHECK(g.ct.s[m] == 2);
}

TEST_CASE("printed cut rule is the corrected one shifted by one") {
  // R'_m = R_{m-1} + 1 for the rule with #S(x_[0,n-1)).
  for (const Fixture& f : kCorpus) {
    Built b = build(f, 40);
    for (Line line : {Line::A, Line::B}) {
      const Word& x = line == Line::A ? b.kd.a : b.kd.b;
      const auto literal = cut_times_literal(b.map, x, 40);
      const auto& cuts = b.ct.cuts(line);
      REQUIRE(literal.size() >= 2);
      CHECK(literal[0] == 0);
      for (std::size_t m = 1; m < literal.size(); ++m) {
        REQUIRE(m - 1 < cuts.size());
        CHECK(literal[m] == cuts[m - 1] + 1);
      }
    }
  }
  Built g = build({"0", kGolden, "++"}, 12);
  CHECK(cut_times_literal(g.map, g.kd.b, 8) == std::vector<int>{0, 1, 3, 5, 7});
}

TEST_CASE("line vertices are follower intervals") {
  // J_n = [x_n] ∩ T(J_{n-1}) is the follower interval of x_[0,n) cut to cell x_n.
  for (const Fixture& f : kCorpus) {
    Built b = build(f, 30);
    for (Line line : {Line::A, Line::B}) {
      const LineTrace& tr = b.ct.trace(line);
      for (int n = 1; n <= 30; ++n) {
        const Interval fol = follower_interval(b.map, slice(tr.symbols, 0, n));
        const Interval c = cell(b.map, tr.symbols[static_cast<std::size_t>(n)]);
        const Interval expect{std::max(fol.lo, c.lo), std::min(fol.hi, c.hi)};
        CHECK(tr.J[static_cast<std::size_t>(n)] == expect);
      }
    }
  }
}

TEST_CASE("diagram examples") {
  Built d = build({"0", "2", "++"}, 5);
  MarkovDiagram md = build_diagram(d.map, d.ct, 3);
  CHECK(md.size() == 2);
  CHECK(md.arrow_count() == 4);
  CHECK(same_diagram(md, build_diagram_interval(d.map, 2)));

  Built g = build({"0", kGolden, "++"}, 12);
  md = build_diagram(g.map, g.ct, 10);
  REQUIRE(md.size() == 2);
  CHECK(md.vertices[0].symbol == 1);
  CHECK(md.vertices[1].symbol == 2);
  CHECK(md.succ[0] == std::vector<int>{0, 1});
  CHECK(md.succ[1] == std::vector<int>{0});
  CHECK(same_diagram(md, build_diagram_interval(g.map, 8)));
  CHECK(project_path(md, {0, 1, 0}) == Word{1, 2, 1});
  CHECK(project_path(md, {}).empty());
  CHECK_THROWS_AS(project_path(md, {1, 1}), Error);

  CHECK(project_path(build_diagram(d.map, d.ct, 3), {0, 1, 0}) == Word{1, 2, 1});
  CHECK_THROWS_AS(build_diagram(d.map, d.ct, 6), Error);
}

TEST_CASE("cross-construction on the corpus and random maps") {
  for (const Fixture& f : kCorpus) {
    Built b = build(f, 26);
    for (int N : {1, 2, 5, 12, 25}) {
      std::string why;
      const bool same = same_diagram(build_diagram(b.map, b.ct, N), build_diagram_interval(b.map, N), &why);
      INFO(f.alpha, " ", f.beta, " ", f.signs, " N=", N, " ", why);
      CHECK(same);
    }
  }
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const long bnum = std::uniform_int_distribution<long>(1100, 3600)(rng);
    const long anum = std::uniform_int_distribution<long>(0, 899)(rng);
    const Quad alpha(mpq_class(anum, 1000)), beta(mpq_class(bnum, 1000));
    const long k = (alpha + beta).ceil();
    std::vector<int> signs;
    for (long i = 0; i < k; ++i) signs.push_back(rng() % 2 ? 1 : -1);
    const MapParams map = build_map(alpha, beta, signs);
    const KneadingData kd = kneading_sequences(map, 20);
    const CutTimes ct = cut_times(map, kd, 19);
    std::string why;
    const bool same = same_diagram(build_diagram(map, ct, 16), build_diagram_interval(map, 16), &why);
    INFO(alpha.str(), " ", beta.str(), " ", signs_string(signs), " ", why);
    CHECK(same);
  }
}

TEST_CASE("identities on the corpus") {
  for (const Fixture& f : kCorpus) {
    Built b = build(f, 200);
    const Classification cl = classify(b.kd, b.ct);
    INFO(f.alpha, " ", f.beta, " ", f.signs);
    for (int L = 0; L < 2; ++L) {
      const Line line = static_cast<Line>(L);
      const auto& own = b.ct.cuts(line);
      const auto& oth = b.ct.cuts(line == Line::A ? Line::B : Line::A);
      const auto& d = line == Line::A ? b.ct.r : b.ct.s;
      const Word& x = line == Line::A ? b.kd.a : b.kd.b;
      for (std::size_t m = 1; m < own.size(); ++m) {
        const bool ret = cl.returns[L][m] != 0;
        const Word& y = (line == Line::A) == ret ? b.kd.a : b.kd.b;
        // x_(R_{m-1}, R_m) = y_[0, r_m - 1)
        CHECK(slice(x, own[m - 1] + 1, own[m]) == slice(y, 0, d[m] - 1));
        if (!ret) {
          const int p = cl.cross[L][m];
          REQUIRE(p >= 0);
          CHECK(oth[static_cast<std::size_t>(p)] == d[m] - 1);
        }
      }
    }
    // Out-degree: at most k pieces, and three or more include a whole cell.
    for (const LineTrace* tr : {&b.ct.a_line, &b.ct.b_line}) {
      for (std::size_t n = 0; n < tr->out_degree.size(); ++n) {
        CHECK(tr->out_degree[n] <= b.map.k);
        if (tr->out_degree[n] >= 3) CHECK(tr->hits_full_cell[n]);
      }
    }
  }
}

TEST_CASE("classification examples") {
  // Doubling: f_m(a) = b^(1) = 1 2 2 ..., sigma of it is b, so m is in A2 with P(m) = 0.
  Built d = build({"0", "2", "++"}, 20);
  Classification cl = classify(d.kd, d.ct);
  for (int m = 1; m <= 20; ++m) {
    CHECK(cl.in_A2(m));
    CHECK(cl.P(m) == 0);
    CHECK(cl.in_B1(m));
    CHECK(cl.Q(m) == 0);
  }
  // Golden b-line: s_1 - 1 = 1 = R_1, so 1 is in B1 with Q(1) = 1.
  Built g = build({"0", kGolden, "++"}, 20);
  cl = classify(g.kd, g.ct);
  CHECK(cl.in_B1(1));
  CHECK(cl.Q(1) == 1);
  CHECK(g.ct.s[1] - 1 == g.ct.R[1]);
  // Every index gets a case.
  for (const Fixture& f : kCorpus) {
    Built b = build(f, 120);
    cl = classify(b.kd, b.ct);
    for (int L = 0; L < 2; ++L) {
      for (std::size_t j = 1; j < cl.cases[L].size(); ++j) CHECK(cl.cases[L][j] != Case::Unresolved);
    }
  }
}

TEST_CASE("lexicographic diagnostic") {
  CutTimes ct;
  Classification cl;
  auto setup = [&](std::vector<int> R, std::vector<int> S) {
    ct.R = R;
    ct.S = S;
    ct.r.assign(R.size(), 0);
    ct.s.assign(S.size(), 0);
    for (std::size_t m = 1; m < R.size(); ++m) ct.r[m] = R[m] - R[m - 1];
    for (std::size_t m = 1; m < S.size(); ++m) ct.s[m] = S[m] - S[m - 1];
    cl.returns[0].assign(R.size() + 1, 0);
    cl.cross[0].assign(R.size() + 1, 1);
  };
  // j = 1, P(1) = 1: first compares S_1 = 3 with r_2 - 1 = 1 < 3.
  setup({0, 4, 6, 8}, {0, 3, 13, 23});
  CHECK(lex_condition(cl, ct, Line::A, 1, 8) == LexResult::FirstHolds);
  // Second compares R_1 = 4 with s_2 - 1 = 2 < 4; first fails (r_2 - 1 = 5 > 3).
  setup({0, 4, 10}, {0, 3, 6});
  CHECK(lex_condition(cl, ct, Line::A, 1, 8) == LexResult::SecondHolds);
  setup({0, 4, 6}, {0, 3, 5});
  CHECK(lex_condition(cl, ct, Line::A, 1, 3) == LexResult::Both);
  // Equal terms up to the horizon on both sides.
  setup({0, 4, 8, 12, 16}, {0, 3, 8, 13, 18});
  CHECK(lex_condition(cl, ct, Line::A, 1, 3) == LexResult::Undetermined);
  setup({0, 4, 8, 12, 16}, {0, 3, 10, 17});
  // r - 1 = 3,3,3 equals S_1 = 3; s - 1 = 6,6 exceeds R_1 = 4.
  CHECK(lex_condition(cl, ct, Line::A, 1, 3) == LexResult::Undetermined);
  setup({0, 4, 9}, {0, 3, 9});
  CHECK(lex_condition(cl, ct, Line::A, 1, 3) == LexResult::Violated);
}
