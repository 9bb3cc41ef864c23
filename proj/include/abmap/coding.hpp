#pragma once

#include <vector>

#include "abmap/map.hpp"

namespace abmap {

using Word = std::vector<int>;

struct Itinerary {
  Word word;
  bool exact = true;  // false: shortened because precision ran out
};

/// Symbols of x, T x, ..., T^{n-1} x. Throws AmbiguousCoding if the orbit
/// lands exactly on an interior critical point before step n.
Itinerary itinerary(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts = {});

struct KneadingData {
  int depth = 0;
  Word a;  // limit at 0+
  Word b;  // limit at 1-
  std::vector<Word> crit_right;  // index i = 1..k-1; entry 0 unused
  std::vector<Word> crit_left;
  /// Which of a ('a') or b ('b') the shifted critical sequences equal,
  /// from the sided image of c_i.
  std::vector<char> tail_right;
  std::vector<char> tail_left;
  int precision_used = 0;  // 0: exact arithmetic
};

/// Sided-limit itinerary of length `depth`.
Word sided_itinerary(const MapParams& map, SidedPoint p, int depth);
KneadingData kneading_sequences(const MapParams& map, int depth);
/// adj pairing on critical sequences: (i, right) <-> (i, left).
const Word& adj(const KneadingData& kd, int i, Side side);

/// sigma^{|u|} [u] as an interval; throws NotInLanguage.
Interval follower_interval(const MapParams& map, const Word& u);
/// S(u): symbols whose cell meets the interior of the follower interval.
std::vector<int> followers(const MapParams& map, const Word& u, int max_depth = 1 << 16);

}  // namespace abmap
