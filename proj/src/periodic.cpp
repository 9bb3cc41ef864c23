#include "abmap/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "abmap/error.hpp"

namespace abmap {

Word canonical_rotation(const Word& w) {
  Word best = w;
  Word r = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(r.begin(), r.begin() + 1, r.end());
    if (r < best) best = r;
  }
  return best;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct LocalGraph {
  std::size_t n = 0, words = 0;
  int k = 0;
  std::vector<int> symbol;   // 0-based
  std::vector<Bits> succ;    // successors inside the component
  std::vector<Bits> by_symbol;

  LocalGraph(const MarkovDiagram& d, const IrreducibleComponent& c) {
    n = c.vertices.size();
    words = (n + 63) / 64;
    std::vector<int> local(d.vertices.size(), -1);
    for (std::size_t i = 0; i < n; ++i) local[static_cast<std::size_t>(c.vertices[i])] = static_cast<int>(i);
    for (int v : c.vertices) k = std::max(k, d.vertices[static_cast<std::size_t>(v)].symbol);
    by_symbol.assign(static_cast<std::size_t>(k), Bits(words, 0));
    succ.assign(n, Bits(words, 0));
    for (std::size_t i = 0; i < n; ++i) {
      const int v = c.vertices[i];
      symbol.push_back(d.vertices[static_cast<std::size_t>(v)].symbol - 1);
      set(by_symbol[static_cast<std::size_t>(symbol.back())], i);
      for (int w : d.succ[static_cast<std::size_t>(v)]) {
        const int lw = local[static_cast<std::size_t>(w)];
        if (lw >= 0) set(succ[i], static_cast<std::size_t>(lw));
      }
    }
  }
  static void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
  static bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
  static bool empty(const Bits& b) {
    return std::all_of(b.begin(), b.end(), [](std::uint64_t x) { return x == 0; });
  }
  /// Vertices with symbol x reachable in one step from `from`.
  Bits step(const Bits& from, int x) const {
    Bits out(words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!test(from, i)) continue;
      for (std::size_t w = 0; w < words; ++w) out[w] |= succ[i][w];
    }
    for (std::size_t w = 0; w < words; ++w) out[w] &= by_symbol[static_cast<std::size_t>(x)][w];
    return out;
  }
};

// Per start vertex, the set of vertices where a walk labelled by the
// current prefix can end.
using WalkState = std::vector<std::pair<std::size_t, Bits>>;

}  // namespace

std::size_t enumerate_cycles(const MarkovDiagram& d, const IrreducibleComponent& c, int max_len, std::size_t budget,
                             const std::function<bool(const Word&)>& emit) {
  if (max_len <= 0 || c.vertices.empty()) return 0;
  const LocalGraph g(d, c);
  std::size_t count = 0;
  bool stop = false;
  for (int len = 1; len <= max_len && !stop; ++len) {
    std::vector<int> a(static_cast<std::size_t>(len) + 1, 0);
    std::vector<WalkState> st(static_cast<std::size_t>(len) + 1);
    auto extend = [&](int t) {
      // a[t] is placed; build st[t] from st[t-1].
      const int x = a[static_cast<std::size_t>(t)];
      WalkState next;
      if (t == 1) {
        for (std::size_t i = 0; i < g.n; ++i) {
          if (g.symbol[i] != x) continue;
          Bits b(g.words, 0);
          LocalGraph::set(b, i);
          next.emplace_back(i, std::move(b));
        }
      } else {
        for (const auto& [s, cur] : st[static_cast<std::size_t>(t) - 1]) {
          Bits b = g.step(cur, x);
          if (!LocalGraph::empty(b)) next.emplace_back(s, std::move(b));
        }
      }
      st[static_cast<std::size_t>(t)] = std::move(next);
      return !st[static_cast<std::size_t>(t)].empty();
    };
    // Fredricksen-Kessler-Maiorana generation of Lyndon words, pruned by
    // the walk states.
    std::function<void(int, int)> gen = [&](int t, int p) {
      if (stop) return;
      if (t > len) {
        if (p != len) return;
        bool closes = false;
        for (const auto& [s, cur] : st[static_cast<std::size_t>(len)]) {
          for (std::size_t i = 0; i < g.n && !closes; ++i)
            if (LocalGraph::test(cur, i) && LocalGraph::test(g.succ[i], s)) closes = true;
          if (closes) break;
        }
        if (!closes) return;
        if (++count > budget) throw Error(ErrorCode::BudgetExceeded, "cycle budget of " + std::to_string(budget) + " exceeded");
        Word w(a.begin() + 1, a.end());
        for (int& x : w) ++x;
        if (!emit(w)) stop = true;
        return;
      }
      const int base = t == 1 ? 0 : a[static_cast<std::size_t>(t - p)];
      for (int x = base; x < g.k && !stop; ++x) {
        a[static_cast<std::size_t>(t)] = x;
        if (!extend(t)) continue;
        gen(t + 1, (t == 1 || x != base) ? t : p);
      }
    };
    gen(1, 1);
  }
  return count;
}

std::vector<Word> enumerate_cycles(const MarkovDiagram& d, const IrreducibleComponent& c, int max_len,
                                   std::size_t budget) {
  std::vector<Word> out;
  enumerate_cycles(d, c, max_len, budget, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

std::vector<int> lift_cycle(const MarkovDiagram& d, const IrreducibleComponent& c, const Word& word) {
  if (word.empty()) return {};
  const LocalGraph g(d, c);
  const std::size_t l = word.size();
  for (std::size_t s = 0; s < g.n; ++s) {
    if (g.symbol[s] != word[0] - 1) continue;
    // Layered reachability with parents.
    std::vector<std::vector<int>> parent(l, std::vector<int>(g.n, -1));
    std::vector<char> cur(g.n, 0);
    cur[s] = 1;
    for (std::size_t t = 1; t < l; ++t) {
      std::vector<char> nxt(g.n, 0);
      for (std::size_t i = 0; i < g.n; ++i) {
        if (!cur[i]) continue;
        for (std::size_t w = 0; w < g.n; ++w) {
          if (!nxt[w] && g.symbol[w] == word[t] - 1 && LocalGraph::test(g.succ[i], w)) {
            nxt[w] = 1;
            parent[t][w] = static_cast<int>(i);
          }
        }
      }
      cur.swap(nxt);
    }
    for (std::size_t e = 0; e < g.n; ++e) {
      if (!cur[e] || !LocalGraph::test(g.succ[e], s)) continue;
      std::vector<int> path(l);
      int v = static_cast<int>(e);
      for (std::size_t t = l; t-- > 0;) {
        path[t] = c.vertices[static_cast<std::size_t>(v)];
        if (t > 0) v = parent[t][static_cast<std::size_t>(v)];
      }
      return path;
    }
  }
  return {};
}

PeriodicOrbit realize_periodic(const MapParams& map, const Word& word) {
  if (word.empty()) throw Error(ErrorCode::NotAdmissible, "empty word");
  for (int x : word)
    if (x < 1 || x > map.k) throw Error(ErrorCode::NotAdmissible, "symbol out of range");
  // T^l restricted to the cylinder is x -> A x + B.
  Quad A(1), B(0);
  for (int x : word) {
    const Quad s = Quad(map.sign(x));
    const Quad off = map.sign(x) > 0 ? map.alpha - Quad(x - 1) : Quad(x) - map.alpha;
    A = s * map.beta * A;
    B = s * map.beta * B + off;
  }
  PeriodicOrbit po;
  po.word = word;
  po.multiplier_sign = A.sign();
  po.log_multiplier = static_cast<double>(word.size()) * std::log(map.beta_d);
  Quad x = B / (Quad(1) - A);
  for (std::size_t j = 0; j < word.size(); ++j) {
    if (x < Quad(0) || x > Quad(1))
      throw Error(ErrorCode::NotAdmissible, "fixed point leaves [0,1] (x_" + std::to_string(j) + " = " + x.str() + ")");
    for (int i = 1; i < map.k; ++i)
      if (x == map.c(i))
        throw Error(ErrorCode::CriticalCollision, "orbit point x_" + std::to_string(j) + " is the critical point c_" +
                                                      std::to_string(i));
    if (branch_of(map, x) != word[j])
      throw Error(ErrorCode::NotAdmissible, "itinerary differs from the word at position " + std::to_string(j));
    po.points.push_back(x);
    po.points_d.push_back(x.to_double());
    x = apply_branch(map, word[j], x);
  }
  if (!(x == po.points.front())) throw std::logic_error("periodic orbit does not close");
  return po;
}

std::vector<double> periodic_points_fast(const MapParams& map, const Word& word, double margin) {
  const std::size_t l = word.size();
  if (l == 0) return {};
  const double beta = map.beta_d, alpha = map.alpha_d;
  double A = 1.0, B = 0.0;
  for (int x : word) {
    const double s = map.sign(x);
    const double off = map.sign(x) > 0 ? alpha - (x - 1) : x - alpha;
    A = s * beta * A;
    B = s * beta * B + off;
  }
  std::vector<double> pts(l);
  double y = B / (1.0 - A);
  pts[0] = y;
  // Inverse branches contract, so walking backwards is stable.
  for (std::size_t t = l; t-- > 1;) {
    const int x = word[t];
    y = map.sign(x) > 0 ? (y + (x - 1) - alpha) / beta : (x - alpha - y) / beta;
    pts[t] = y;
  }
  const auto& c = map.critical_d;
  for (std::size_t t = 0; t < l; ++t) {
    const int x = word[t];
    const double lo = c[static_cast<std::size_t>(x - 1)], hi = c[static_cast<std::size_t>(x)];
    const double lo_m = x == 1 ? 0.0 : lo + margin, hi_m = x == map.k ? 1.0 : hi - margin;
    if (!(pts[t] >= lo_m - 1e-15 && pts[t] <= hi_m + 1e-15)) return {};
    pts[t] = std::clamp(pts[t], 0.0, 1.0);
  }
  // The first point came from the closed formula; it must map onto the last.
  const int x = word[l - 1];
  const double back = map.sign(x) > 0 ? (pts[0] + (x - 1) - alpha) / beta : (x - alpha - pts[0]) / beta;
  if (l > 1 && std::fabs(back - pts[l - 1]) > 1e-9) return {};
  return pts;
}

// ---------------------------------------------------------------------------

HrContext::HrContext(const MapParams& m, const KneadingData& k, const CutTimes& c, const Classification& cls,
                     const MarkovDiagram& dg, const ComponentReport& r)
    : map(&m), kd(&k), ct(&c), cl(&cls), d(&dg), rep(&r) {
  a_vertex.assign(static_cast<std::size_t>(dg.N), -1);
  b_vertex.assign(static_cast<std::size_t>(dg.N), -1);
  for (int v = 0; v < dg.size(); ++v) {
    for (const VertexLabel& l : dg.vertices[static_cast<std::size_t>(v)].labels) {
      if (l.n < 0 || l.n >= dg.N) continue;
      if (l.tag == Tag::A) a_vertex[static_cast<std::size_t>(l.n)] = v;
      if (l.tag == Tag::B) b_vertex[static_cast<std::size_t>(l.n)] = v;
    }
  }
}

namespace {

bool is_cell(const HrContext& ctx, int v) {
  const Vertex& vx = ctx.d->vertices[static_cast<std::size_t>(v)];
  return vx.iv == cell(*ctx.map, vx.symbol);
}

bool in_depth(const HrContext& ctx, int v, int n) {
  if (is_cell(ctx, v)) return true;
  for (const VertexLabel& l : ctx.d->vertices[static_cast<std::size_t>(v)].labels)
    if ((l.tag == Tag::A || l.tag == Tag::B) && l.n <= n) return true;
  return false;
}

// Shortest path from `from` to `to` (both inclusive), optionally confined to
// a set of vertices; counts expansions against `budget`.
std::vector<int> bfs_path(const MarkovDiagram& d, int from, int to, const std::vector<char>* allowed,
                          std::size_t& budget) {
  std::vector<int> parent(d.vertices.size(), -2);
  std::deque<int> q{from};
  parent[static_cast<std::size_t>(from)] = -1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    if (v == to) break;
    if (budget == 0) return {};
    --budget;
    for (int w : d.succ[static_cast<std::size_t>(v)]) {
      if (parent[static_cast<std::size_t>(w)] != -2) continue;
      if (allowed && !(*allowed)[static_cast<std::size_t>(w)]) continue;
      parent[static_cast<std::size_t>(w)] = v;
      q.push_back(w);
    }
  }
  if (parent[static_cast<std::size_t>(to)] == -2) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<char> membership(const HrContext& ctx) {
  std::vector<char> in(ctx.d->vertices.size(), 0);
  for (int v : ctx.rep->main().vertices) in[static_cast<std::size_t>(v)] = 1;
  return in;
}

Word project(const HrContext& ctx, const std::vector<int>& cycle) {
  Word w;
  for (int v : cycle) w.push_back(ctx.d->vertices[static_cast<std::size_t>(v)].symbol);
  return w;
}

}  // namespace

HrPolicy default_hr_policy(const HrContext& ctx) {
  HrPolicy pol;
  pol.n0 = ctx.rep->n0;
  if (pol.n0 < 0) throw Error(ErrorCode::NoComponentFound, "no distinguished component");
  const auto& R = ctx.ct->R;
  const auto& S = ctx.ct->S;
  for (std::size_t m = 1; m < std::min(R.size(), S.size()); ++m) {
    if (R[m] >= pol.n0 && S[m] >= pol.n0) {
      pol.m0 = static_cast<int>(m);
      break;
    }
  }
  if (pol.m0 < 0) throw Error(ErrorCode::DepthExceeded, "no m with R_m, S_m >= n0 at this depth");
  pol.N0 = std::max(R[static_cast<std::size_t>(pol.m0)], S[static_cast<std::size_t>(pol.m0)]);
  const std::vector<char> in = membership(ctx);
  const auto& comp = ctx.rep->main().vertices;
  int n1 = 0;
  for (int from : comp) {
    if (!in_depth(ctx, from, pol.n0)) continue;
    // BFS distances inside the component.
    std::vector<int> dist(ctx.d->vertices.size(), -1);
    std::deque<int> q{from};
    dist[static_cast<std::size_t>(from)] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : ctx.d->succ[static_cast<std::size_t>(v)]) {
        if (!in[static_cast<std::size_t>(w)] || dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(w);
      }
    }
    for (int to : comp)
      if (in_depth(ctx, to, pol.N0)) n1 = std::max(n1, dist[static_cast<std::size_t>(to)]);
  }
  pol.n1 = n1;
  pol.N1 = pol.N0 + n1;
  return pol;
}

namespace {

struct LineView {
  Line line;
  const Word* x;
  const Word* y;  // the partner sequence
  const std::vector<int>* X;  // own cut times
  const std::vector<int>* Y;  // partner cut times
  const std::vector<int>* xv;
  const std::vector<int>* yv;
};

LineView view(const HrContext& ctx, Line line) {
  const bool a = line == Line::A;
  return {line,
          a ? &ctx.kd->a : &ctx.kd->b,
          a ? &ctx.kd->b : &ctx.kd->a,
          a ? &ctx.ct->R : &ctx.ct->S,
          a ? &ctx.ct->S : &ctx.ct->R,
          a ? &ctx.a_vertex : &ctx.b_vertex,
          a ? &ctx.b_vertex : &ctx.a_vertex};
}

int at(const std::vector<int>& v, int i) {
  if (i < 0 || i >= static_cast<int>(v.size())) return -1;
  return v[static_cast<std::size_t>(i)];
}

Word slice(const Word& w, int from, int to) { return Word(w.begin() + from, w.begin() + to); }

// Line vertices lv[from..to] as a path; empty if one is missing.
std::vector<int> line_path(const std::vector<int>& lv, int from, int to) {
  std::vector<int> p;
  for (int n = from; n <= to; ++n) {
    const int v = at(lv, n);
    if (v < 0) return {};
    p.push_back(v);
  }
  return p;
}

void finish(const HrContext& ctx, HRWitness& w, int Xj, int Xm, int N1) {
  w.p = project(ctx, w.cycle);
  w.slack = static_cast<int>(w.u.size()) - (Xj - Xm - N1);
}

bool generic_search(const HrContext& ctx, const LineView& lv, int j, int N1, std::size_t& budget, HRWitness& out) {
  const auto& X = *lv.X;
  const int Xj = X[static_cast<std::size_t>(j)];
  for (int m = j - 1; m >= 1; --m) {
    const int Xm = X[static_cast<std::size_t>(m)];
    std::vector<int> path = line_path(*lv.xv, Xm, Xj - 1);
    if (path.empty()) continue;
    std::vector<int> back = bfs_path(*ctx.d, path.back(), path.front(), nullptr, budget);
    // A path to itself has length 0 in the BFS; we need at least one arrow.
    if (back.size() == 1) {
      if (!ctx.d->has_arrow(path.back(), path.front())) {
        back.clear();
        for (int s : ctx.d->succ[static_cast<std::size_t>(path.back())]) {
          auto tail = bfs_path(*ctx.d, s, path.front(), nullptr, budget);
          if (!tail.empty() && (back.empty() || tail.size() + 1 < back.size())) {
            back = {path.back()};
            back.insert(back.end(), tail.begin(), tail.end());
          }
        }
      } else {
        back = {path.back(), path.front()};
      }
    }
    if (back.size() < 2) {
      if (budget == 0) return false;
      continue;
    }
    out.m = m;
    out.cycle = path;
    out.cycle.insert(out.cycle.end(), back.begin() + 1, back.end() - 1);
    out.u = slice(*lv.x, Xm, Xj);
    out.constructed = false;
    finish(ctx, out, Xj, Xm, N1);
    return true;
  }
  return false;
}

// Case C: A_{R_j - 1} -> B_{S_P(j)} and S(B_{S_P(j) - 1}) meets D_0. The
// loop runs B_[S_m0, S_P(j)) and returns from a cell successor to B_{S_m0}.
// When S_P(j) <= S_m0 the loop starts at B_0 instead, which is a cell.
bool construct_C(const HrContext& ctx, const LineView& lv, int j, int N1, int m0, std::size_t& budget, HRWitness& out) {
  const int p = ctx.cl->cross[static_cast<int>(lv.line)][static_cast<std::size_t>(j)];
  const auto& Y = *lv.Y;
  const int Yp = at(Y, p);
  int start = at(Y, m0);
  if (p < 0 || Yp < 1 || start < 0) {
    out.note = "case C needs S_P(j) >= 1 within depth";
    return false;
  }
  if (Yp <= start) {
    start = 0;
    out.note = "case C started at B_0 since S_P(j) <= S_m0";
  }
  std::vector<int> path = line_path(*lv.yv, start, Yp - 1);
  if (path.empty()) {
    out.note = "case C path beyond truncation";
    return false;
  }
  const std::vector<char> in = membership(ctx);
  std::vector<int> best;
  for (const std::vector<char>* allowed : {&in, static_cast<const std::vector<char>*>(nullptr)}) {
    for (int D : ctx.d->succ[static_cast<std::size_t>(path.back())]) {
      if (!is_cell(ctx, D)) continue;
      if (allowed && !(*allowed)[static_cast<std::size_t>(D)]) continue;
      auto back = bfs_path(*ctx.d, D, path.front(), allowed, budget);
      if (!back.empty() && (best.empty() || back.size() < best.size())) best = back;
    }
    if (!best.empty()) break;
  }
  if (best.empty()) {
    out.note = "case C: no return from a D_0 successor";
    return false;
  }
  out.m = j - 1;
  out.cycle = path;
  out.cycle.insert(out.cycle.end(), best.begin(), best.end() - 1);
  out.u = slice(*lv.y, start, Yp);
  out.constructed = true;
  finish(ctx, out, (*lv.X)[static_cast<std::size_t>(j)], (*lv.X)[static_cast<std::size_t>(j - 1)], N1);
  return true;
}

// Case D: B_{S_{P+1} - 1} -> B_{u'} with u' = s_{P+1} - 1; the loop
// B_(S_P, S_{P+1}) B_[u', S_P] closes along line arrows.
bool construct_D(const HrContext& ctx, const LineView& lv, int j, int N1, HRWitness& out) {
  const int p = ctx.cl->cross[static_cast<int>(lv.line)][static_cast<std::size_t>(j)];
  const auto& Y = *lv.Y;
  const int Yp = at(Y, p), Yp1 = at(Y, p + 1);
  if (p < 0 || Yp < 0 || Yp1 < 0) {
    out.note = "case D needs S_{P(j)+1} within depth";
    return false;
  }
  const int up = Yp1 - Yp - 1;
  if (up > Yp) {
    out.note = "case D: s_{P+1} - 1 exceeds S_P";
    return false;
  }
  std::vector<int> first = Yp + 1 <= Yp1 - 1 ? line_path(*lv.yv, Yp + 1, Yp1 - 1) : std::vector<int>{};
  std::vector<int> second = line_path(*lv.yv, up, Yp);
  if ((Yp + 1 <= Yp1 - 1 && first.empty()) || second.empty()) {
    out.note = "case D path beyond truncation";
    return false;
  }
  out.m = j - 1;
  out.cycle = first;
  out.cycle.insert(out.cycle.end(), second.begin(), second.end());
  // a_(R_{j-1}, R_j) = b_(S_P, S_{P+1}) b_[u', S_P).
  out.u = slice(*lv.y, Yp + 1, Yp1);
  const Word rest = slice(*lv.y, up, Yp);
  out.u.insert(out.u.end(), rest.begin(), rest.end());
  out.constructed = true;
  finish(ctx, out, (*lv.X)[static_cast<std::size_t>(j)], (*lv.X)[static_cast<std::size_t>(j - 1)], N1);
  return true;
}

// Case E: S(A_{R_j - 1}) meets D_0; close through D back to A_{R_m0}.
bool construct_E(const HrContext& ctx, const LineView& lv, int j, int N1, int m0, std::size_t& budget, HRWitness& out) {
  const auto& X = *lv.X;
  if (m0 < 1 || m0 >= j) {
    out.note = "case E needs m0 < j";
    return false;
  }
  const int Xm = X[static_cast<std::size_t>(m0)], Xj = X[static_cast<std::size_t>(j)];
  std::vector<int> path = line_path(*lv.xv, Xm, Xj - 1);
  if (path.empty()) {
    out.note = "case E path beyond truncation";
    return false;
  }
  const std::vector<char> in = membership(ctx);
  std::vector<int> best;
  for (int D : ctx.d->succ[static_cast<std::size_t>(path.back())]) {
    if (!is_cell(ctx, D) || !in[static_cast<std::size_t>(D)]) continue;
    auto back = bfs_path(*ctx.d, D, path.front(), &in, budget);
    if (!back.empty() && (best.empty() || back.size() < best.size())) best = back;
  }
  if (best.empty()) {
    out.note = "case E: no return from a D_0 successor";
    return false;
  }
  out.m = m0;
  out.cycle = path;
  out.cycle.insert(out.cycle.end(), best.begin(), best.end() - 1);
  out.u = slice(*lv.x, Xm, Xj);
  out.constructed = true;
  finish(ctx, out, Xj, Xm, N1);
  return true;
}

}  // namespace

HRWitness hr_witness(const HrContext& ctx, Line line, int j, int N0, int N1, std::size_t search_budget,
                     bool use_construction) {
  const LineView lv = view(ctx, line);
  const auto& X = *lv.X;
  if (j < 1 || j >= static_cast<int>(X.size()))
    throw Error(ErrorCode::DepthExceeded, "cut index " + std::to_string(j) + " beyond the computed cut times");
  const int Xj = X[static_cast<std::size_t>(j)];
  if (Xj <= N0) throw Error(ErrorCode::DepthExceeded, "X_j = " + std::to_string(Xj) + " <= N0 = " + std::to_string(N0));
  if (Xj > ctx.d->N)
    throw Error(ErrorCode::DepthExceeded, "X_j = " + std::to_string(Xj) + " beyond the diagram truncation");
  HRWitness w;
  w.line = line;
  w.j = j;
  w.kase = ctx.cl->case_of(line, j);
  std::size_t budget = search_budget;
  if (use_construction) {
    int m0 = -1;
    if (w.kase == Case::C || w.kase == Case::E) m0 = default_hr_policy(ctx).m0;
    bool ok = false;
    if (w.kase == Case::C) ok = construct_C(ctx, lv, j, N1, m0, budget, w);
    if (w.kase == Case::D) ok = construct_D(ctx, lv, j, N1, w);
    if (w.kase == Case::E) ok = construct_E(ctx, lv, j, N1, m0, budget, w);
    if (ok) return w;
  }
  if (generic_search(ctx, lv, j, N1, budget, w)) return w;
  throw Error(ErrorCode::NoWitnessInBudget, "no closing cycle for j = " + std::to_string(j) +
                                                (budget == 0 ? " (budget exhausted)" : " (no return path)"));
}

bool verify_witness(const HrContext& ctx, const HRWitness& w, int N1, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const LineView lv = view(ctx, w.line);
  const auto& X = *lv.X;
  if (!(w.m >= 1 && w.m < w.j && w.j < static_cast<int>(X.size()))) return fail("m out of range");
  if (w.cycle.empty() || w.cycle.size() != w.p.size()) return fail("cycle and word lengths differ");
  for (std::size_t i = 0; i < w.cycle.size(); ++i)
    if (!ctx.d->has_arrow(w.cycle[i], w.cycle[(i + 1) % w.cycle.size()])) return fail("cycle is not a closed walk");
  if (project(ctx, w.cycle) != w.p) return fail("cycle does not project to p");
  const int Xm = X[static_cast<std::size_t>(w.m)], Xj = X[static_cast<std::size_t>(w.j)];
  const Word seg = slice(*lv.x, Xm, Xj);
  if (std::search(seg.begin(), seg.end(), w.u.begin(), w.u.end()) == seg.end()) return fail("u not in x_[X_m, X_j)");
  if (std::search(w.p.begin(), w.p.end(), w.u.begin(), w.u.end()) == w.p.end()) return fail("u not in p_[0,l)");
  const int slack = static_cast<int>(w.u.size()) - (Xj - Xm - N1);
  if (slack != w.slack) return fail("slack mismatch");
  if (slack < 0) return fail("negative slack");
  return true;
}

// ---------------------------------------------------------------------------

namespace {

struct Scorer {
  const MapParams& map;
  Cdf target;
  std::size_t evaluated = 0;

  double score(const Word& w) {
    ++evaluated;
    std::vector<double> pts = periodic_points_fast(map, w);
    if (pts.empty()) return std::numeric_limits<double>::infinity();
    std::sort(pts.begin(), pts.end());
    return w1_to_points(target, pts);
  }
};

// Lyndon words of length n over {1..k} in lexicographic order.
void lyndon_words(int n, int k, const std::function<bool(const Word&)>& emit) {
  std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
  bool stop = false;
  std::function<void(int, int)> gen = [&](int t, int p) {
    if (stop) return;
    if (t > n) {
      if (p == n) {
        Word w(a.begin() + 1, a.end());
        for (int& x : w) ++x;
        if (!emit(w)) stop = true;
      }
      return;
    }
    a[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t - p)];
    gen(t + 1, p);
    for (int x = a[static_cast<std::size_t>(t - p)] + 1; x < k && !stop; ++x) {
      a[static_cast<std::size_t>(t)] = x;
      gen(t + 1, t);
    }
  };
  gen(1, 1);
}

double lyndon_count(int n, int k) {
  // (1/n) sum_{d | n} mu(d) k^{n/d}; an upper estimate k^n / n suffices.
  return std::pow(static_cast<double>(k), n) / n;
}

}  // namespace

ApproxResult approximate_by_periodic(const MapParams& map, const EmpiricalMeasure& target, const ApproxOptions& opts) {
  if (opts.max_len < 1) throw Error(ErrorCode::ConfigInvalid, "max_len must be positive");
  if (target.atoms.empty()) throw Error(ErrorCode::ConfigInvalid, "empty target measure");
  Scorer sc{map, Cdf(target)};
  ApproxResult res;
  res.best_by_length.assign(static_cast<std::size_t>(opts.max_len), std::numeric_limits<double>::infinity());
  // Ranked candidates; the best one that realizes exactly wins.
  std::vector<std::pair<double, Word>> ranked;
  auto offer = [&](double s, const Word& w, int len) {
    if (!std::isfinite(s)) return;
    auto& best = res.best_by_length[static_cast<std::size_t>(len - 1)];
    best = std::min(best, s);
    ranked.emplace_back(s, w);
    if (ranked.size() > 64) {
      std::sort(ranked.begin(), ranked.end());
      ranked.resize(16);
    }
  };
  const Cdf& tc = sc.target;

  for (int len = 1; len <= opts.max_len; ++len) {
    if (res.candidates >= opts.budget) {
      res.budget_exhausted = true;
      break;
    }
    const std::size_t quota = std::min(opts.per_length, opts.budget - res.candidates);
    std::size_t used = 0;
    auto try_word = [&](const Word& w) {
      ++used;
      const double s = sc.score(w);
      offer(s, w, len);
      return s;
    };
    if (lyndon_count(len, map.k) <= static_cast<double>(quota)) {
      lyndon_words(len, map.k, [&](const Word& w) {
        try_word(w);
        return used < quota;
      });
    } else {
      // Hill-climb from itineraries of target quantiles: single-symbol
      // changes, first improvement, until the quota runs out.
      for (int s = 0; s < opts.seeds && used < quota; ++s) {
        double x = tc.quantile((s + 0.5) / opts.seeds);
        Word w;
        for (int t = 0; t < len; ++t) {
          const auto [y, b] = eval(map, x);
          w.push_back(b);
          x = y;
        }
        double cur = try_word(w);
        bool improved = true;
        while (improved && used < quota) {
          improved = false;
          for (int pos = 0; pos < len && used < quota && !improved; ++pos) {
            for (int sym = 1; sym <= map.k && used < quota; ++sym) {
              if (sym == w[static_cast<std::size_t>(pos)]) continue;
              Word v = w;
              v[static_cast<std::size_t>(pos)] = sym;
              const double sv = try_word(v);
              if (sv < cur) {
                w = std::move(v);
                cur = sv;
                improved = true;
                break;
              }
            }
          }
        }
      }
    }
    res.candidates += used;
  }

  std::sort(ranked.begin(), ranked.end());
  for (const auto& [s, w] : ranked) {
    try {
      res.orbit = realize_periodic(map, w);
    } catch (const Error&) {
      continue;
    }
    res.distance = w1_distance(uniform_atoms(res.orbit.points_d), target);
    return res;
  }
  throw Error(ErrorCode::BudgetExceeded, "no admissible periodic word found within the budget");
}

}  // namespace abmap
