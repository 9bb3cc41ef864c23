#pragma once

#include <string>
#include <vector>

#include "abmap/coding.hpp"
#include "abmap/map.hpp"

namespace abmap {

enum class Line { A = 0, B = 1 };

/// Interior critical point c_i approached from one side, together with
/// which kneading sequence its image continues as ('a' for 0+, 'b' for 1-).
struct CriticalRef {
  int index = 0;
  Side side = Side::Right;
  char tail = '?';
};

/// The vertices D_n = sigma^n [x_[0,n]] of one kneading line as intervals,
/// with the branching data read off along the way.
struct LineTrace {
  std::vector<Interval> J;          // J[0..depth]
  Word symbols;                     // cell of J[n]
  std::vector<int> cuts;            // R_0 = 0 < R_1 < ... <= depth
  std::vector<CriticalRef> f;       // f[m], m >= 1: critical end of J[R_{m-1}]
  std::vector<int> out_degree;      // number of pieces of T(J[n]), n < depth
  std::vector<char> hits_full_cell; // T(J[n]) contains a whole cell, n < depth
};

LineTrace trace_line(const MapParams& map, const SidedPoint& start, int depth);

struct CutTimes {
  int depth = 0;
  std::vector<int> R, S;  // R[0] = S[0] = 0
  std::vector<int> r, s;  // r[m] = R[m] - R[m-1] for m >= 1; r[0] = 0
  LineTrace a_line, b_line;
  bool partial = true;    // always true: only cut times up to depth are known

  const std::vector<int>& cuts(Line l) const { return l == Line::A ? R : S; }
  const LineTrace& trace(Line l) const { return l == Line::A ? a_line : b_line; }
};

/// Cut times of the a- and b-lines up to `depth`; the line symbols are
/// checked against the kneading prefixes.
CutTimes cut_times(const MapParams& map, const KneadingData& kneading, int depth);

/// The cut rule as printed, min{n > R_m : #S(x_[0,n-1)) >= 2}, evaluated
/// by follower sets. Kept for comparison with the corrected rule.
std::vector<int> cut_times_literal(const MapParams& map, const Word& x, int depth);

enum class Case { A, B, C, D, E, F1, F2, F3, F, Unresolved };
std::string_view to_string(Case c);

enum class LexResult { FirstHolds, SecondHolds, Both, Undetermined, Violated };
std::string_view to_string(LexResult r);

/// Classification of cut indices. Sets are stored per line so that the
/// b-line statements are the a-line ones with the roles of a and b swapped:
/// returns[A][m] is m in A1, returns[B][m] is m in B2, cross[A] is P,
/// cross[B] is Q, in3[A] is A3 and in3[B] is B3.
struct Classification {
  std::vector<char> returns[2];
  std::vector<int> cross[2];  // -1 where undefined
  std::vector<char> in3[2];
  std::vector<Case> cases[2];
  std::vector<LexResult> lex[2];
  int horizon = 0;

  int count(Line l) const { return static_cast<int>(returns[static_cast<int>(l)].size()) - 1; }
  bool in_A1(int m) const { return returns[0][static_cast<std::size_t>(m)] != 0; }
  bool in_A2(int m) const { return !in_A1(m); }
  bool in_B1(int m) const { return returns[1][static_cast<std::size_t>(m)] == 0; }
  bool in_B2(int m) const { return !in_B1(m); }
  int P(int m) const { return cross[0][static_cast<std::size_t>(m)]; }
  int Q(int m) const { return cross[1][static_cast<std::size_t>(m)]; }
  Case case_of(Line l, int j) const { return cases[static_cast<int>(l)][static_cast<std::size_t>(j)]; }
};

/// `horizon` bounds the lexicographic comparisons used to split Case F.
Classification classify(const KneadingData& kneading, const CutTimes& ct, int horizon = 64);

/// First condition: S_{P(j)}^inf > (r_{j+i} - 1)_{i>=1}; second:
/// R_j^inf > (s_{P(j)+i} - 1)_{i>=1}. For the b-line the roles of R and S,
/// and of P and Q, are exchanged.
LexResult lex_condition(const Classification& cl, const CutTimes& ct, Line line, int j, int horizon);

enum class Tag { A, B, Base };

struct VertexLabel {
  Tag tag = Tag::A;
  int n = 0;  // line index, or cell index for Base
  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

struct Vertex {
  Interval iv;
  int symbol = 0;
  std::vector<VertexLabel> labels;  // every name this set carries
};

/// Vertices are sorted by (lo, hi); succ lists are sorted.
struct MarkovDiagram {
  int N = 0;
  std::vector<Vertex> vertices;
  std::vector<std::vector<int>> succ;

  int size() const { return static_cast<int>(vertices.size()); }
  /// Vertex index carrying the label, or -1.
  int find(Tag tag, int n) const;
  bool has_arrow(int from, int to) const;
  std::size_t arrow_count() const;
};

/// Arrows from the cut-time rules: A_n -> A_{n+1}, B_n -> B_{n+1},
/// A_{R_m-1} -> A_{r_m-1} or B_{r_m-1}, the symmetric b-line arrows, arrows
/// to full middle cells crossed by a branching image, and [i] -> every cell.
MarkovDiagram build_diagram(const MapParams& map, const CutTimes& ct, int N);
/// Successor sets [l] ∩ T(C) computed by iterating interval images N-1 rounds.
MarkovDiagram build_diagram_interval(const MapParams& map, int N);
/// Same vertex intervals and the same arrows.
bool same_diagram(const MarkovDiagram& x, const MarkovDiagram& y, std::string* why = nullptr);

/// Psi: the cell symbol of each vertex; throws NotAPath.
Word project_path(const MarkovDiagram& d, const std::vector<int>& path);

std::string label_string(const Vertex& v);

}  // namespace abmap
