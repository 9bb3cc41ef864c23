#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abmap/analysis.hpp"
#include "abmap/map.hpp"

namespace abmap {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct DeviationEstimate {
  Window window;
  std::vector<int> n;
  std::vector<std::uint64_t> count;
  std::vector<double> fraction;
  std::vector<double> log_rate;  // -log(fraction) / n, +inf on zero counts
  double slope = 0.0;            // estimated decay rate
  double band = 0.0;             // two standard errors
  int points_used = 0;           // n values with at least min_count hits
  bool all_zero = false;
};

struct McOptions {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  double jitter = 0x1p-40;        // per-step noise amplitude
  std::uint64_t min_count = 5;    // hits needed for an n to enter the fit
  unsigned threads = 0;           // 0: hardware concurrency
  bool force_scalar = false;
};

/// Lebesgue-sampled Birkhoff averages of a per-symbol observable, with one
/// pass over the largest n serving every n and every window. The orbit is
/// computed in double precision with a tiny uniform perturbation after
/// each step, so it does not collapse onto the dyadic fixed points.
/// The rate is the least-squares slope of -log(fraction) against n when two
/// or more n have enough hits, else -log(fraction)/n at the one that does.
std::vector<DeviationEstimate> mc_deviation_rates(const MapParams& map, const std::vector<double>& observable,
                                                  const std::vector<Window>& windows, const std::vector<int>& n_list,
                                                  const McOptions& opts = {});
/// Single window; throws AllZeroCounts when no n has enough hits.
DeviationEstimate mc_deviation_rate(const MapParams& map, const std::vector<double>& observable, Window window,
                                    const std::vector<int>& n_list, const McOptions& opts = {});

struct RateCurve {
  std::vector<double> s;
  std::vector<double> rate;  // +inf outside [min f, max f]
  std::vector<double> t_star;
  double h_top = 0.0;
  std::string source = "legendre";
};

/// I(s) = sup_t [t s - (P(t) - h_top)], the supremum taken over t_grid and
/// refined by golden-section search between the neighbours of the best
/// grid point.
RateCurve rate_from_pressure(const MarkovDiagram& d, const IrreducibleComponent& c, const std::vector<double>& f,
                             const std::vector<double>& t_grid, const std::vector<double>& s_grid);

/// inf of the curve over a window, by linear interpolation on the grid.
double window_rate(const RateCurve& curve, Window w);

}  // namespace abmap
