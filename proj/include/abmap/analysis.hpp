#pragma once

#include <vector>

#include "abmap/diagram.hpp"
#include "abmap/measures.hpp"

namespace abmap {

struct IrreducibleComponent {
  std::vector<int> vertices;  // sorted diagram indices
  bool cyclic = false;        // carries at least one closed walk
  bool closed = false;        // no arrow leaves the component
  bool deep = false;          // contains A_n0 and B_n0
};

struct ComponentReport {
  /// Strongly connected components, sources first.
  std::vector<IrreducibleComponent> components;
  std::vector<int> component_of;
  int distinguished = -1;
  int n0 = -1;

  const IrreducibleComponent& main() const { return components.at(static_cast<std::size_t>(distinguished)); }
};

/// Tarjan decomposition; picks the cyclic component that holds A_n and B_n
/// for the largest n, and reports the least such n as n0. Leaves
/// distinguished at -1 when there is none.
ComponentReport strongly_connected(const MarkovDiagram& d);
/// As above but throws NoComponentFound without a distinguished component.
ComponentReport scc_irreducible(const MarkovDiagram& d);

struct SpectralResult {
  double value = 0.0;  // log of the Perron root
  double rho = 0.0;
  std::vector<double> right;  // over component vertices, sums to 1
  std::vector<double> left;
  double residual = 0.0;  // relative Collatz-Wielandt gap
  int iterations = 0;
  int N = 0;
};

struct PerronOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
  bool want_left = false;
};

/// Perron root of a nonnegative irreducible row-major n x n matrix by power
/// iteration on A + cI, stopped when max/min of (Ax)_i / x_i agree.
SpectralResult perron(const std::vector<double>& a, std::size_t n, const PerronOptions& opts = {});

/// 0/1 arrow matrix restricted to the component.
std::vector<double> adjacency(const MarkovDiagram& d, const IrreducibleComponent& c);

SpectralResult entropy_estimate(const MarkovDiagram& d, const IrreducibleComponent& c, double tolerance = 1e-12);

/// Stationary Markov measure l_v r_v spread uniformly over each vertex
/// interval, binned into `bins` equal cells.
HistogramMeasure mme_estimate(const MarkovDiagram& d, const IrreducibleComponent& c, std::size_t bins,
                              double tolerance = 1e-12);

/// log Perron root of M_{CD} exp(t f(symbol of D)); f[i] is the value on cell i+1.
double pressure(const MarkovDiagram& d, const IrreducibleComponent& c, const std::vector<double>& f, double t,
                double tolerance = 1e-12);

}  // namespace abmap
