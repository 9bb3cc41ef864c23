#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "abmap/map.hpp"

namespace abmap {

struct Atom {
  double x = 0.0;
  double w = 0.0;
};

/// Finitely many atoms, sorted by position, equal positions merged.
struct EmpiricalMeasure {
  std::vector<Atom> atoms;
  double total() const;
};

/// Mass spread uniformly inside each bin [edges[i], edges[i+1]].
struct HistogramMeasure {
  std::vector<double> edges;
  std::vector<double> mass;
  std::size_t bins() const { return mass.size(); }
  /// mass / width for bin i.
  double density(std::size_t i) const { return mass[i] / (edges[i + 1] - edges[i]); }
};

/// Sorts, merges equal positions and normalizes the weights to sum 1.
EmpiricalMeasure make_measure(std::vector<Atom> atoms);
EmpiricalMeasure uniform_atoms(const std::vector<double>& points);
HistogramMeasure uniform_bins(std::size_t bins);

/// CDF on [0,1] that is linear between knots and may jump at knots.
/// Atomic measures give step functions, histograms piecewise linear ones.
class Cdf {
 public:
  explicit Cdf(const EmpiricalMeasure& m);
  explicit Cdf(const HistogramMeasure& m);

  double at(double x) const;
  /// Integral of F over [0, x].
  double integral(double x) const;
  /// inf{x in [0,1] : F(x) >= c}.
  double quantile(double c) const;

  const std::vector<double>& knots() const { return x_; }
  /// Left limit and value at knot i.
  double left(std::size_t i) const { return fl_[i]; }
  double right(std::size_t i) const { return fr_[i]; }

 private:
  void finish();
  std::vector<double> x_, fl_, fr_, cum_;
};

/// Integral of |F_mu - F_nu| over [0,1], from the merged knot lists.
double w1_distance(const Cdf& mu, const Cdf& nu);
double w1_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
double w1_distance(const EmpiricalMeasure& mu, const HistogramMeasure& nu);
double w1_distance(const HistogramMeasure& mu, const HistogramMeasure& nu);

/// W1 between the uniform measure on sorted points p and a target CDF,
/// in O(|p| log(knots)).
double w1_to_points(const Cdf& target, const std::vector<double>& sorted_points);

/// (1/n) sum_{j<n} delta_{T^j x0}; the orbit is computed with certified
/// enclosures (escalating precision, exact fallback).
EmpiricalMeasure empirical_measure(const MapParams& map, const Quad& x0, int n, const OrbitOptions& opts = {});
/// Empirical measure from a Lebesgue-random dyadic start with enough bits
/// (n log2 beta + 64) that the orbit is a genuine orbit of that point.
EmpiricalMeasure random_orbit_measure(const MapParams& map, int n, std::uint64_t seed, Quad* start = nullptr);

double observable_average(const EmpiricalMeasure& m, const std::function<double(double)>& f);
/// f given per symbol cell (index 0 is cell 1).
double observable_average(const EmpiricalMeasure& m, const MapParams& map, const std::vector<double>& per_symbol);
double observable_average(const HistogramMeasure& m, const MapParams& map, const std::vector<double>& per_symbol);

}  // namespace abmap
