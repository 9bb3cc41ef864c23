#include "abmap/diagram.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "abmap/error.hpp"

namespace abmap {

namespace {

struct IntervalLess {
  bool operator()(const Interval& x, const Interval& y) const {
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.hi < y.hi;
  }
};

int critical_index(const MapParams& map, const Quad& v) {
  for (int i = 1; i < map.k; ++i) {
    if (v == map.c(i)) return i;
  }
  return 0;
}

bool contains_sided(const Interval& piece, const SidedPoint& p) {
  if (p.side == Side::Right) return piece.lo <= p.value && p.value < piece.hi;
  return piece.lo < p.value && p.value <= piece.hi;
}

CriticalRef critical_end(const MapParams& map, const Interval& j, const SidedPoint& x_end) {
  // The tracked end sits on one side; the other end is a branch boundary
  // approached from inside J.
  const bool x_at_lo = x_end.side == Side::Right && x_end.value == j.lo;
  const SidedPoint other = x_at_lo ? SidedPoint{j.hi, Side::Left} : SidedPoint{j.lo, Side::Right};
  CriticalRef f;
  f.index = critical_index(map, other.value);
  f.side = other.side;
  if (f.index == 0) throw std::logic_error("line piece does not end at a critical point");
  const SidedResult img = eval_sided(map, other);
  f.tail = img.q.value.sign() == 0 ? 'a' : 'b';
  return f;
}

}  // namespace

LineTrace trace_line(const MapParams& map, const SidedPoint& start, int depth) {
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "line depth must be at least 1");
  LineTrace t;
  t.J.reserve(static_cast<std::size_t>(depth) + 1);
  SidedPoint end = start;
  const int s0 = eval_sided(map, start).symbol;
  t.J.push_back(cell(map, s0));
  t.symbols.push_back(s0);
  t.cuts.push_back(0);
  t.f.push_back({});
  t.f.push_back(critical_end(map, t.J[0], end));
  for (int n = 0; n < depth; ++n) {
    const Interval img = image(map, t.symbols.back(), t.J.back());
    const auto pieces = split_by_cells(map, img);
    const SidedPoint next = eval_sided(map, end).q;
    const std::pair<int, Interval>* chosen = nullptr;
    bool full = false;
    for (const auto& p : pieces) {
      if (contains_sided(p.second, next)) chosen = &p;
      if (p.second == cell(map, p.first)) full = true;
    }
    if (chosen == nullptr) throw std::logic_error("tracked end left its line interval");
    t.out_degree.push_back(static_cast<int>(pieces.size()));
    t.hits_full_cell.push_back(full ? 1 : 0);
    t.J.push_back(chosen->second);
    t.symbols.push_back(chosen->first);
    end = next;
    if (pieces.size() >= 2) {
      t.cuts.push_back(n + 1);
      t.f.push_back(critical_end(map, t.J.back(), end));
    }
  }
  return t;
}

CutTimes cut_times(const MapParams& map, const KneadingData& kneading, int depth) {
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "depth must be at least 1");
  if (kneading.depth < depth + 1) {
    throw Error(ErrorCode::InsufficientKneadingDepth,
                "kneading depth " + std::to_string(kneading.depth) + " < " + std::to_string(depth + 1));
  }
  CutTimes ct;
  ct.depth = depth;
  ct.a_line = trace_line(map, {Quad(0), Side::Right}, depth);
  ct.b_line = trace_line(map, {Quad(1), Side::Left}, depth);
  for (int n = 0; n <= depth; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (ct.a_line.symbols[i] != kneading.a[i] || ct.b_line.symbols[i] != kneading.b[i]) {
      throw std::logic_error("line symbols disagree with kneading prefix at " + std::to_string(n));
    }
  }
  ct.R = ct.a_line.cuts;
  ct.S = ct.b_line.cuts;
  ct.r.assign(ct.R.size(), 0);
  ct.s.assign(ct.S.size(), 0);
  for (std::size_t m = 1; m < ct.R.size(); ++m) ct.r[m] = ct.R[m] - ct.R[m - 1];
  for (std::size_t m = 1; m < ct.S.size(); ++m) ct.s[m] = ct.S[m] - ct.S[m - 1];
  return ct;
}

std::vector<int> cut_times_literal(const MapParams& map, const Word& x, int depth) {
  std::vector<int> R{0};
  for (int n = 1; n <= depth && n - 1 <= static_cast<int>(x.size()); ++n) {
    if (n <= R.back()) continue;
    const Word prefix(x.begin(), x.begin() + (n - 1));
    if (followers(map, prefix).size() >= 2) R.push_back(n);
  }
  return R;
}

std::string_view to_string(Case c) {
  switch (c) {
    case Case::A: return "A";
    case Case::B: return "B";
    case Case::C: return "C";
    case Case::D: return "D";
    case Case::E: return "E";
    case Case::F1: return "F1";
    case Case::F2: return "F2";
    case Case::F3: return "F3";
    case Case::F: return "F";
    case Case::Unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(LexResult r) {
  switch (r) {
    case LexResult::FirstHolds: return "first";
    case LexResult::SecondHolds: return "second";
    case LexResult::Both: return "both";
    case LexResult::Undetermined: return "undetermined";
    case LexResult::Violated: return "violated";
  }
  return "?";
}

namespace {

enum class Tri { Holds, Fails, Open };

// c^inf > (d[start+i] - 1)_{i>=0} lexicographically, looking at `horizon` terms.
Tri const_beats(int c, const std::vector<int>& d, int start, int horizon) {
  for (int i = 0; i < horizon; ++i) {
    const int idx = start + i;
    if (idx >= static_cast<int>(d.size())) return Tri::Open;
    const int term = d[static_cast<std::size_t>(idx)] - 1;
    if (term < c) return Tri::Holds;
    if (term > c) return Tri::Fails;
  }
  return Tri::Open;
}

const Word& critical_sequence(const KneadingData& kd, const CriticalRef& f) {
  const auto i = static_cast<std::size_t>(f.index);
  return f.side == Side::Right ? kd.crit_right[i] : kd.crit_left[i];
}

}  // namespace

LexResult lex_condition(const Classification& cl, const CutTimes& ct, Line line, int j, int horizon) {
  const int L = static_cast<int>(line);
  const Line other = line == Line::A ? Line::B : Line::A;
  if (j < 1 || j >= static_cast<int>(cl.returns[L].size())) throw Error(ErrorCode::DepthExceeded, "index beyond classified range");
  if (cl.returns[L][static_cast<std::size_t>(j)]) throw Error(ErrorCode::ConfigInvalid, "lex condition needs a crossing index");
  const int p = cl.cross[L][static_cast<std::size_t>(j)];
  if (p < 0) throw Error(ErrorCode::DepthExceeded, "P/Q undefined at the available depth");
  const auto& own = ct.cuts(line);
  const auto& oth = ct.cuts(other);
  const auto& own_d = line == Line::A ? ct.r : ct.s;
  const auto& oth_d = line == Line::A ? ct.s : ct.r;
  (void)own;
  const Tri first = const_beats(oth[static_cast<std::size_t>(p)], own_d, j + 1, horizon);
  const Tri second = const_beats(ct.cuts(line)[static_cast<std::size_t>(j)], oth_d, p + 1, horizon);
  if (first == Tri::Holds && second == Tri::Holds) return LexResult::Both;
  if (first == Tri::Holds) return LexResult::FirstHolds;
  if (second == Tri::Holds) return LexResult::SecondHolds;
  if (first == Tri::Fails && second == Tri::Fails) return LexResult::Violated;
  return LexResult::Undetermined;
}

Classification classify(const KneadingData& kneading, const CutTimes& ct, int horizon) {
  Classification cl;
  cl.horizon = horizon;
  for (int L = 0; L < 2; ++L) {
    const Line line = static_cast<Line>(L);
    const LineTrace& tr = ct.trace(line);
    const auto& own = ct.cuts(line);
    const auto& oth = ct.cuts(line == Line::A ? Line::B : Line::A);
    const auto& own_d = line == Line::A ? ct.r : ct.s;
    const int M = static_cast<int>(own.size()) - 1;
    const Word& self = line == Line::A ? kneading.a : kneading.b;
    const Word& partner = line == Line::A ? kneading.b : kneading.a;
    // f is known one index past the last cut.
    cl.returns[L].assign(static_cast<std::size_t>(M) + 2, 0);
    cl.cross[L].assign(static_cast<std::size_t>(M) + 2, -1);
    cl.in3[L].assign(static_cast<std::size_t>(M) + 1, 0);
    for (int m = 1; m <= M + 1; ++m) {
      const CriticalRef& f = tr.f[static_cast<std::size_t>(m)];
      // sigma(f_m(x)) compared as sequences on the available depth.
      const Word& seq = critical_sequence(kneading, f);
      const Word tail(seq.begin() + 1, seq.end());
      const bool to_self = std::equal(tail.begin(), tail.end(), self.begin());
      const bool to_partner = std::equal(tail.begin(), tail.end(), partner.begin());
      if (to_self == to_partner) throw std::logic_error("critical tail matches neither kneading sequence");
      const char own_tag = line == Line::A ? 'a' : 'b';
      if (to_self != (f.tail == own_tag)) throw std::logic_error("critical tail disagrees with its sided image");
      cl.returns[L][static_cast<std::size_t>(m)] = to_self ? 1 : 0;
      if (!to_self && m <= M) {
        const int target = own_d[static_cast<std::size_t>(m)] - 1;
        const auto it = std::find(oth.begin(), oth.end(), target);
        if (it != oth.end()) cl.cross[L][static_cast<std::size_t>(m)] = static_cast<int>(it - oth.begin());
      }
      if (m <= M) cl.in3[L][static_cast<std::size_t>(m)] = tr.hits_full_cell[static_cast<std::size_t>(own[static_cast<std::size_t>(m)] - 1)];
    }
  }
  for (int L = 0; L < 2; ++L) {
    const Line line = static_cast<Line>(L);
    const int O = 1 - L;
    const int M = static_cast<int>(ct.cuts(line).size()) - 1;
    const int MO = static_cast<int>(ct.cuts(static_cast<Line>(O)).size()) - 1;
    cl.cases[L].assign(static_cast<std::size_t>(M) + 1, Case::Unresolved);
    cl.lex[L].assign(static_cast<std::size_t>(M) + 1, LexResult::Undetermined);
    for (int j = 1; j <= M; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      Case c = Case::Unresolved;
      const int p = cl.cross[L][uj];
      if (cl.returns[L][uj]) {
        c = Case::A;
      } else if (cl.returns[L][uj + 1]) {
        c = Case::B;
      } else if (p < 0) {
        c = Case::Unresolved;
      } else if (p >= 1 && p <= MO && cl.in3[O][static_cast<std::size_t>(p)]) {
        c = Case::C;
      } else if (p + 1 <= MO + 1 && cl.returns[O][static_cast<std::size_t>(p) + 1]) {
        c = Case::D;
      } else if (cl.in3[L][uj]) {
        c = Case::E;
      } else {
        const LexResult lr = lex_condition(cl, ct, line, j, horizon);
        cl.lex[L][uj] = lr;
        if (lr == LexResult::SecondHolds || lr == LexResult::Both) {
          c = Case::F1;
        } else if (lr == LexResult::FirstHolds && p - 1 >= 1) {
          c = cl.returns[O][static_cast<std::size_t>(p) - 1] ? Case::F3 : Case::F2;
        } else {
          c = Case::F;
        }
      }
      cl.cases[L][uj] = c;
    }
  }
  return cl;
}

int MarkovDiagram::find(Tag tag, int n) const {
  for (int v = 0; v < size(); ++v) {
    for (const VertexLabel& l : vertices[static_cast<std::size_t>(v)].labels) {
      if (l.tag == tag && l.n == n) return v;
    }
  }
  return -1;
}

bool MarkovDiagram::has_arrow(int from, int to) const {
  const auto& s = succ[static_cast<std::size_t>(from)];
  return std::binary_search(s.begin(), s.end(), to);
}

std::size_t MarkovDiagram::arrow_count() const {
  std::size_t n = 0;
  for (const auto& s : succ) n += s.size();
  return n;
}

namespace {

class DiagramBuilder {
 public:
  explicit DiagramBuilder(const MapParams& map) : map_(map) {}

  void add_vertex(const Interval& iv, VertexLabel label) {
    auto it = index_.find(iv);
    if (it == index_.end()) {
      index_.emplace(iv, static_cast<int>(labels_.size()));
      intervals_.push_back(iv);
      labels_.push_back({label});
    } else {
      labels_[static_cast<std::size_t>(it->second)].push_back(label);
    }
  }

  bool has(const Interval& iv) const { return index_.count(iv) != 0; }

  void add_arrow(const Interval& from, const Interval& to) { arrows_.emplace_back(from, to); }

  MarkovDiagram finish(int N) const {
    // Canonical order by (lo, hi), arrows induced on the vertex set.
    std::vector<int> order(intervals_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    IntervalLess less;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return less(intervals_[static_cast<std::size_t>(x)], intervals_[static_cast<std::size_t>(y)]);
    });
    std::map<Interval, int, IntervalLess> pos;
    MarkovDiagram d;
    d.N = N;
    for (int v : order) {
      const Interval& iv = intervals_[static_cast<std::size_t>(v)];
      pos.emplace(iv, static_cast<int>(d.vertices.size()));
      Vertex vx;
      vx.iv = iv;
      vx.symbol = cell_containing(map_, iv);
      vx.labels = labels_[static_cast<std::size_t>(v)];
      d.vertices.push_back(std::move(vx));
    }
    d.succ.assign(d.vertices.size(), {});
    for (const auto& [from, to] : arrows_) {
      const auto f = pos.find(from);
      const auto t = pos.find(to);
      if (f == pos.end() || t == pos.end()) continue;
      d.succ[static_cast<std::size_t>(f->second)].push_back(t->second);
    }
    for (auto& s : d.succ) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return d;
  }

 private:
  const MapParams& map_;
  std::map<Interval, int, IntervalLess> index_;
  std::vector<Interval> intervals_;
  std::vector<std::vector<VertexLabel>> labels_;
  std::vector<std::pair<Interval, Interval>> arrows_;
};

}  // namespace

MarkovDiagram build_diagram(const MapParams& map, const CutTimes& ct, int N) {
  if (N < 1) throw Error(ErrorCode::ConfigInvalid, "N must be at least 1");
  if (ct.depth < N) {
    throw Error(ErrorCode::InsufficientKneadingDepth,
                "cut times known to depth " + std::to_string(ct.depth) + " but N = " + std::to_string(N));
  }
  DiagramBuilder b(map);
  for (int n = 0; n < N; ++n) {
    b.add_vertex(ct.a_line.J[static_cast<std::size_t>(n)], {Tag::A, n});
    b.add_vertex(ct.b_line.J[static_cast<std::size_t>(n)], {Tag::B, n});
  }
  for (int i = 2; i <= map.k - 1; ++i) b.add_vertex(cell(map, i), {Tag::Base, i});

  for (int L = 0; L < 2; ++L) {
    const Line line = static_cast<Line>(L);
    const LineTrace& tr = ct.trace(line);
    const LineTrace& other = ct.trace(line == Line::A ? Line::B : Line::A);
    const char own_tag = line == Line::A ? 'a' : 'b';
    for (int n = 0; n < N; ++n) b.add_arrow(tr.J[static_cast<std::size_t>(n)], tr.J[static_cast<std::size_t>(n) + 1]);
    const auto& cuts = tr.cuts;
    for (std::size_t m = 1; m < cuts.size(); ++m) {
      const int src = cuts[m] - 1;
      if (src >= N) break;
      const int width = cuts[m] - cuts[m - 1];
      const LineTrace& tgt_line = tr.f[m].tail == own_tag ? tr : other;
      const Interval& tgt = tgt_line.J[static_cast<std::size_t>(width - 1)];
      const Interval& from = tr.J[static_cast<std::size_t>(src)];
      b.add_arrow(from, tgt);
      // Cells strictly between the two end pieces are covered entirely.
      const int s1 = tr.symbols[static_cast<std::size_t>(cuts[m])];
      const int s2 = tgt_line.symbols[static_cast<std::size_t>(width - 1)];
      for (int l = std::min(s1, s2) + 1; l < std::max(s1, s2); ++l) b.add_arrow(from, cell(map, l));
    }
  }
  for (int i = 2; i <= map.k - 1; ++i) {
    for (int l = 1; l <= map.k; ++l) b.add_arrow(cell(map, i), cell(map, l));
  }
  return b.finish(N);
}

MarkovDiagram build_diagram_interval(const MapParams& map, int N) {
  if (N < 1) throw Error(ErrorCode::ConfigInvalid, "N must be at least 1");
  DiagramBuilder b(map);
  std::vector<Interval> all;
  std::vector<Interval> frontier;
  std::map<Interval, std::vector<Interval>, IntervalLess> successors;
  auto successors_of = [&](const Interval& iv) -> const std::vector<Interval>& {
    auto it = successors.find(iv);
    if (it != successors.end()) return it->second;
    std::vector<Interval> out;
    const int j = cell_containing(map, iv);
    for (auto& [l, piece] : split_by_cells(map, image(map, j, iv))) out.push_back(std::move(piece));
    return successors.emplace(iv, std::move(out)).first->second;
  };
  for (int l = 1; l <= map.k; ++l) {
    b.add_vertex(cell(map, l), {Tag::Base, l});
    all.push_back(cell(map, l));
    frontier.push_back(cell(map, l));
  }
  for (int round = 0; round + 1 < N; ++round) {
    std::vector<Interval> next;
    for (const Interval& iv : frontier) {
      for (const Interval& s : successors_of(iv)) {
        if (b.has(s)) continue;
        b.add_vertex(s, {Tag::Base, 0});
        all.push_back(s);
        next.push_back(s);
      }
    }
    frontier = std::move(next);
  }
  for (const Interval& iv : all) {
    for (const Interval& s : successors_of(iv)) b.add_arrow(iv, s);
  }
  MarkovDiagram d = b.finish(N);
  // Only the cells carry names in the oracle.
  for (Vertex& v : d.vertices) {
    std::erase_if(v.labels, [](const VertexLabel& l) { return l.n == 0; });
  }
  return d;
}

bool same_diagram(const MarkovDiagram& x, const MarkovDiagram& y, std::string* why) {
  auto say = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (x.size() != y.size()) return say("vertex counts " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  for (int v = 0; v < x.size(); ++v) {
    const auto uv = static_cast<std::size_t>(v);
    if (!(x.vertices[uv].iv == y.vertices[uv].iv)) return say("vertex " + std::to_string(v) + " intervals differ");
    if (x.succ[uv] != y.succ[uv]) return say("arrows out of vertex " + std::to_string(v) + " differ");
  }
  return true;
}

Word project_path(const MarkovDiagram& d, const std::vector<int>& path) {
  Word w;
  w.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int v = path[i];
    if (v < 0 || v >= d.size()) throw Error(ErrorCode::NotAPath, "unknown vertex " + std::to_string(v));
    if (i > 0 && !d.has_arrow(path[i - 1], v)) {
      throw Error(ErrorCode::NotAPath, "no arrow " + std::to_string(path[i - 1]) + " -> " + std::to_string(v));
    }
    w.push_back(d.vertices[static_cast<std::size_t>(v)].symbol);
  }
  return w;
}

std::string label_string(const Vertex& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.labels.size(); ++i) {
    if (i) os << '=';
    const VertexLabel& l = v.labels[i];
    if (l.tag == Tag::Base) {
      os << '[' << l.n << ']';
    } else {
      os << (l.tag == Tag::A ? 'A' : 'B') << l.n;
    }
  }
  return os.str();
}

}  // namespace abmap
