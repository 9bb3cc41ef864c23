#pragma once

#include <string>
#include <vector>

#include "abmap/quad.hpp"

namespace abmap {

/// Generalized (alpha, beta)-transformation with branch orientations `signs`.
/// Branch i (1-based) acts on I_i = [c_{i-1}, c_i) (the last one closed) by
///   y = alpha + beta x - (i-1)   if signs[i-1] = +1,
///   y = i - alpha - beta x       if signs[i-1] = -1.
struct MapParams {
  Quad alpha;
  Quad beta;
  std::vector<int> signs;
  int k = 0;
  std::vector<Quad> critical_points;  // c_0 = 0, ..., c_k = 1
  int precision_bits = 256;

  double alpha_d = 0.0;
  double beta_d = 0.0;
  std::vector<double> critical_d;

  int sign(int branch) const { return signs[static_cast<std::size_t>(branch - 1)]; }
  const Quad& c(int i) const { return critical_points[static_cast<std::size_t>(i)]; }
};

enum class Side { Left, Right };

/// One-sided limit lim_{y -> value -/+ 0}.
struct SidedPoint {
  Quad value;
  Side side = Side::Right;

  friend bool operator==(const SidedPoint&, const SidedPoint&) = default;
};

struct EvalResult {
  Quad y;
  int branch = 0;
};

struct SidedResult {
  SidedPoint q;
  int symbol = 0;
};

/// Closed interval with exact endpoints.
struct Interval {
  Quad lo;
  Quad hi;

  bool degenerate() const { return !(lo < hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

MapParams build_map(const Quad& alpha, const Quad& beta, const std::vector<int>& signs, int precision_bits = 256);
/// Parses alpha/beta with parse_real and signs from "+-+" style text.
MapParams build_map(const std::string& alpha, const std::string& beta, const std::string& signs,
                    int precision_bits = 256);
std::vector<int> parse_signs(const std::string& text);
std::string signs_string(const std::vector<int>& signs);

/// Branch of x under the half-open convention.
int branch_of(const MapParams& map, const Quad& x);
/// Value of branch `branch` extended to the closure of its interval.
Quad apply_branch(const MapParams& map, int branch, const Quad& x);
EvalResult eval(const MapParams& map, const Quad& x);
/// Double-precision evaluation, for sampling and plotting only.
std::pair<double, int> eval(const MapParams& map, double x);

SidedResult eval_sided(const MapParams& map, const SidedPoint& p);

/// Image of an interval lying in the closure of cell `branch`.
Interval image(const MapParams& map, int branch, const Interval& iv);
/// Cell j with iv inside closure(I_j); 0 if none.
int cell_containing(const MapParams& map, const Interval& iv);
/// Nondegenerate pieces iv ∩ closure(I_l), l = 1..k, with their cell index.
std::vector<std::pair<int, Interval>> split_by_cells(const MapParams& map, const Interval& iv);
Interval cell(const MapParams& map, int j);

struct OrbitOptions {
  int precision_bits = 0;     // 0: use map.precision_bits
  int max_precision_bits = 0; // 0: 64 times the starting precision
  bool exact_fallback = true;
  bool escalate = true;        // double the precision on ambiguity
  bool partial_ok = false;     // without fallback: return the determined prefix
};

struct OrbitResult {
  std::vector<double> values;   // n+1 entries
  std::vector<int> branches;    // branch of values[j], j < n
  double max_radius = 0.0;      // rigorous enclosure radius (0 when exact)
  int precision_used = 0;       // bits; 0 when the exact fallback ran
  bool exact = false;
  /// Step at which a ball met a critical point (-1 if never).
  int ambiguous_step = -1;
  /// First step j whose point is exactly an interior critical point (-1 if none).
  int critical_hit_step = -1;
};

/// Orbit of an exact starting point with interval arithmetic at increasing
/// precision. If a ball still contains a branch boundary at the cap the
/// exact Q(sqrt d) orbit is used, or PrecisionExhausted is thrown when the
/// fallback is disabled.
OrbitResult orbit(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts = {});
/// As orbit(); with `strict` an enclosure that merely touches a critical
/// point also forces escalation, so that every branch is certified to lie
/// in an open cell unless the point is exactly critical.
OrbitResult orbit_checked(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts, bool strict);
/// Exact orbit x, T x, ..., T^n x.
std::vector<Quad> orbit_exact(const MapParams& map, const Quad& x, int n);

}  // namespace abmap
