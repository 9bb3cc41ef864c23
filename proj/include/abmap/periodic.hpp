#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "abmap/analysis.hpp"
#include "abmap/coding.hpp"
#include "abmap/diagram.hpp"
#include "abmap/measures.hpp"

namespace abmap {

struct PeriodicOrbit {
  Word word;
  std::vector<Quad> points;
  std::vector<double> points_d;
  int multiplier_sign = 1;      // sign of the slope of T^l
  double log_multiplier = 0.0;  // l log beta
};

/// Least rotation of w.
Word canonical_rotation(const Word& w);

/// Primitive words labelling closed walks inside the component, lengths
/// 1..max_len, each once in least-rotation form, shortest first and
/// lexicographic within a length. `emit` may return false to stop early.
/// Throws BudgetExceeded after `budget` words.
std::size_t enumerate_cycles(const MarkovDiagram& d, const IrreducibleComponent& c, int max_len, std::size_t budget,
                             const std::function<bool(const Word&)>& emit);
std::vector<Word> enumerate_cycles(const MarkovDiagram& d, const IrreducibleComponent& c, int max_len,
                                   std::size_t budget = 100000);

/// A closed vertex walk inside the component projecting to `word`, or empty.
std::vector<int> lift_cycle(const MarkovDiagram& d, const IrreducibleComponent& c, const Word& word);

/// Exact periodic orbit with itinerary `word`: the fixed point of the
/// composed affine branches. Throws NotAdmissible or CriticalCollision.
PeriodicOrbit realize_periodic(const MapParams& map, const Word& word);

/// Periodic orbit points in double precision by backward iteration through
/// the inverse branches; empty when the word is not realizable with
/// every point strictly inside its cell.
std::vector<double> periodic_points_fast(const MapParams& map, const Word& word, double margin = 1e-12);

// ---------------------------------------------------------------------------
// Shadowing witnesses

struct HrPolicy {
  int n0 = -1;
  int m0 = -1;
  int N0 = -1;
  int n1 = -1;
  int N1 = -1;
};

/// Everything the witness search reads; built once per map.
struct HrContext {
  const MapParams* map = nullptr;
  const KneadingData* kd = nullptr;
  const CutTimes* ct = nullptr;
  const Classification* cl = nullptr;
  const MarkovDiagram* d = nullptr;
  const ComponentReport* rep = nullptr;
  std::vector<int> a_vertex, b_vertex;  // vertex of A_n, B_n; -1 past the truncation

  HrContext(const MapParams& map, const KneadingData& kd, const CutTimes& ct, const Classification& cl,
            const MarkovDiagram& d, const ComponentReport& rep);
  const std::vector<int>& line_vertex(Line l) const { return l == Line::A ? a_vertex : b_vertex; }
};

/// m0 is the least m >= 1 with R_m, S_m >= n0; N0 = max(R_m0, S_m0);
/// n1 is the longest shortest path inside the component from a vertex of
/// D_n0 to one of D_N0; N1 = N0 + n1.
HrPolicy default_hr_policy(const HrContext& ctx);

struct HRWitness {
  Line line = Line::A;
  int j = 0;
  Case kase = Case::Unresolved;
  int m = 0;
  Word p;                  // one period
  std::vector<int> cycle;  // closed vertex walk with Psi(cycle) = p
  Word u;
  int slack = 0;           // |u| - (X_j - X_m - N1)
  bool constructed = false;  // explicit construction rather than search
  std::string note;
};

/// Witness for index j of the given line (X = R for the a-line, S for the
/// b-line). Cases C, D and E use the explicit constructions when their
/// preconditions hold at the truncation; every other index, and any
/// construction that cannot be formed, goes to a cycle search closing
/// the line path X_m .. X_j - 1. Throws DepthExceeded when X_j <= N0 or
/// the truncation is too shallow, NoWitnessInBudget when the search fails.
HRWitness hr_witness(const HrContext& ctx, Line line, int j, int N0, int N1, std::size_t search_budget = 1000000,
                     bool use_construction = true);

/// Re-checks a witness from scratch: 1 <= m < j, the cycle is a closed
/// walk projecting to p, u occurs in x_[X_m, X_j) and in p, slack >= 0.
bool verify_witness(const HrContext& ctx, const HRWitness& w, int N1, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Approximation of a measure by periodic orbit measures

struct ApproxOptions {
  int max_len = 40;
  std::size_t budget = 100000;      // candidate words scored in total
  std::size_t per_length = 2500;    // candidate words scored per period length
  int seeds = 64;                   // hill-climb starting points per length
};

struct ApproxResult {
  PeriodicOrbit orbit;
  double distance = 0.0;             // exact W1 of the realized orbit measure
  std::vector<double> best_by_length;  // index l-1; +inf when nothing admissible
  std::size_t candidates = 0;
  bool budget_exhausted = false;
};

/// Searches periodic orbits of length <= max_len for the one whose orbit
/// measure is closest in W1 to `target`. Lengths are processed in order
/// with a fixed per-length effort, exhaustively while the number of words
/// fits the quota and by hill-climbing from itineraries of target quantiles
/// beyond that, so the distance never increases with max_len.
ApproxResult approximate_by_periodic(const MapParams& map, const EmpiricalMeasure& target,
                                     const ApproxOptions& opts = {});

}  // namespace abmap
