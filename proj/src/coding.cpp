#include "abmap/coding.hpp"

#include "abmap/error.hpp"

namespace abmap {

Itinerary itinerary(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts) {
  if (n < 0) throw Error(ErrorCode::ConfigInvalid, "itinerary length must be nonnegative");
  const OrbitResult r = orbit_checked(map, x, n, opts, true);
  if (r.critical_hit_step >= 0 && r.critical_hit_step < n) {
    throw Error(ErrorCode::AmbiguousCoding,
                "orbit of " + x.str() + " hits a critical point at step " + std::to_string(r.critical_hit_step));
  }
  Itinerary it;
  it.word = r.branches;
  it.exact = static_cast<int>(it.word.size()) == n;
  return it;
}

Word sided_itinerary(const MapParams& map, SidedPoint p, int depth) {
  Word w;
  w.reserve(static_cast<std::size_t>(depth));
  for (int t = 0; t < depth; ++t) {
    SidedResult s = eval_sided(map, p);
    w.push_back(s.symbol);
    p = std::move(s.q);
  }
  return w;
}

namespace {

char tail_of(const MapParams& map, const SidedPoint& p) {
  const SidedResult s = eval_sided(map, p);
  if (s.q.value.sign() == 0 && s.q.side == Side::Right) return 'a';
  if (s.q.value == Quad(1) && s.q.side == Side::Left) return 'b';
  return '?';
}

}  // namespace

KneadingData kneading_sequences(const MapParams& map, int depth) {
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "kneading depth must be at least 1");
  KneadingData kd;
  kd.depth = depth;
  kd.a = sided_itinerary(map, {Quad(0), Side::Right}, depth);
  kd.b = sided_itinerary(map, {Quad(1), Side::Left}, depth);
  const auto k = static_cast<std::size_t>(map.k);
  kd.crit_right.resize(k);
  kd.crit_left.resize(k);
  kd.tail_right.assign(k, '?');
  kd.tail_left.assign(k, '?');
  for (int i = 1; i < map.k; ++i) {
    const SidedPoint r{map.c(i), Side::Right};
    const SidedPoint l{map.c(i), Side::Left};
    kd.crit_right[static_cast<std::size_t>(i)] = sided_itinerary(map, r, depth);
    kd.crit_left[static_cast<std::size_t>(i)] = sided_itinerary(map, l, depth);
    kd.tail_right[static_cast<std::size_t>(i)] = tail_of(map, r);
    kd.tail_left[static_cast<std::size_t>(i)] = tail_of(map, l);
  }
  return kd;
}

const Word& adj(const KneadingData& kd, int i, Side side) {
  if (i < 1 || static_cast<std::size_t>(i) >= kd.crit_right.size())
    throw Error(ErrorCode::ConfigInvalid, "critical index out of range");
  return side == Side::Right ? kd.crit_left[static_cast<std::size_t>(i)] : kd.crit_right[static_cast<std::size_t>(i)];
}

Interval follower_interval(const MapParams& map, const Word& u) {
  Interval j{Quad(0), Quad(1)};
  for (std::size_t t = 0; t < u.size(); ++t) {
    const int s = u[t];
    if (s < 1 || s > map.k) throw Error(ErrorCode::NotInLanguage, "symbol out of range");
    Interval piece{std::max(j.lo, map.c(s - 1)), std::min(j.hi, map.c(s))};
    if (piece.degenerate()) {
      throw Error(ErrorCode::NotInLanguage, "word leaves the language at position " + std::to_string(t));
    }
    j = image(map, s, piece);
  }
  return j;
}

std::vector<int> followers(const MapParams& map, const Word& u, int max_depth) {
  if (static_cast<int>(u.size()) > max_depth) {
    throw Error(ErrorCode::DepthExceeded, "word longer than the available depth " + std::to_string(max_depth));
  }
  const Interval j = follower_interval(map, u);
  std::vector<int> out;
  for (const auto& [l, piece] : split_by_cells(map, j)) out.push_back(l);
  return out;
}

}  // namespace abmap
