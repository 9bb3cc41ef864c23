#include "abmap/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "abmap/error.hpp"

namespace abmap {

double EmpiricalMeasure::total() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.w;
  return s;
}

EmpiricalMeasure make_measure(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  EmpiricalMeasure m;
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.w > 0.0)) throw Error(ErrorCode::ConfigInvalid, "atom weights must be positive");
    if (a.x < 0.0 || a.x > 1.0) throw Error(ErrorCode::ConfigInvalid, "atom outside [0,1]");
    total += a.w;
    if (!m.atoms.empty() && m.atoms.back().x == a.x) {
      m.atoms.back().w += a.w;
    } else {
      m.atoms.push_back(a);
    }
  }
  if (m.atoms.empty()) throw Error(ErrorCode::ConfigInvalid, "empty measure");
  for (Atom& a : m.atoms) a.w /= total;
  return m;
}

EmpiricalMeasure uniform_atoms(const std::vector<double>& points) {
  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  for (double p : points) atoms.push_back({p, 1.0});
  return make_measure(std::move(atoms));
}

HistogramMeasure uniform_bins(std::size_t bins) {
  HistogramMeasure h;
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
  h.mass.assign(bins, 1.0 / static_cast<double>(bins));
  return h;
}

Cdf::Cdf(const EmpiricalMeasure& m) {
  double c = 0.0;
  if (m.atoms.empty() || m.atoms.front().x > 0.0) {
    x_.push_back(0.0);
    fl_.push_back(0.0);
    fr_.push_back(0.0);
  }
  for (const Atom& a : m.atoms) {
    x_.push_back(a.x);
    fl_.push_back(c);
    c += a.w;
    fr_.push_back(c);
  }
  if (x_.back() < 1.0) {
    x_.push_back(1.0);
    fl_.push_back(c);
    fr_.push_back(c);
  }
  finish();
}

Cdf::Cdf(const HistogramMeasure& m) {
  double c = 0.0;
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    x_.push_back(m.edges[i]);
    fl_.push_back(c);
    fr_.push_back(c);
    if (i < m.mass.size()) c += m.mass[i];
  }
  finish();
}

void Cdf::finish() {
  // Normalize the top value to exactly 1 to keep quantiles in range.
  const double top = fr_.back();
  if (top > 0.0) {
    for (std::size_t i = 0; i < x_.size(); ++i) {
      fl_[i] /= top;
      fr_[i] /= top;
    }
  }
  cum_.assign(x_.size(), 0.0);
  for (std::size_t i = 1; i < x_.size(); ++i) {
    cum_[i] = cum_[i - 1] + 0.5 * (fr_[i - 1] + fl_[i]) * (x_[i] - x_[i - 1]);
  }
}

namespace {

// Index i with x_[i] <= x < x_[i+1], clamped to the last segment.
std::size_t segment(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

}  // namespace

double Cdf::at(double x) const {
  if (x < x_.front()) return 0.0;
  if (x >= x_.back()) return fr_.back();
  const std::size_t i = segment(x_, x);
  if (x == x_[i]) return fr_[i];
  const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return fr_[i] + (fl_[i + 1] - fr_[i]) * t;
}

double Cdf::integral(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return cum_.back() + fr_.back() * (x - x_.back());
  const std::size_t i = segment(x_, x);
  return cum_[i] + 0.5 * (fr_[i] + at(x)) * (x - x_[i]);
}

double Cdf::quantile(double c) const {
  if (c <= 0.0) return x_.front();
  // First knot whose right value reaches c.
  const auto it = std::lower_bound(fr_.begin(), fr_.end(), c);
  if (it == fr_.end()) return x_.back();
  const std::size_t i = static_cast<std::size_t>(it - fr_.begin());
  if (fl_[i] >= c && i > 0) {
    // Reached inside the segment before knot i (continuous rise).
    const double a = fr_[i - 1];
    const double b = fl_[i];
    const double t = b > a ? (c - a) / (b - a) : 1.0;
    return x_[i - 1] + t * (x_[i] - x_[i - 1]);
  }
  return x_[i];
}

double w1_distance(const Cdf& mu, const Cdf& nu) {
  std::vector<double> xs = mu.knots();
  xs.insert(xs.end(), nu.knots().begin(), nu.knots().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = xs[i];
    const double b = xs[i + 1];
    // Both CDFs are linear on (a, b); take the one-sided values at the ends.
    const double mid = 0.5 * (a + b);
    const double fa = mu.at(a), ga = nu.at(a);
    const double fm = mu.at(mid), gm = nu.at(mid);
    const double d0 = fa - ga;
    const double d1 = 2.0 * (fm - gm) - d0;  // linear extrapolation to b-
    const double len = b - a;
    if ((d0 >= 0.0) == (d1 >= 0.0)) {
      total += 0.5 * (std::abs(d0) + std::abs(d1)) * len;
    } else {
      const double s = std::abs(d0) + std::abs(d1);
      total += 0.5 * (d0 * d0 + d1 * d1) / s * len;
    }
  }
  return total;
}

double w1_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) { return w1_distance(Cdf(mu), Cdf(nu)); }
double w1_distance(const EmpiricalMeasure& mu, const HistogramMeasure& nu) { return w1_distance(Cdf(mu), Cdf(nu)); }
double w1_distance(const HistogramMeasure& mu, const HistogramMeasure& nu) { return w1_distance(Cdf(mu), Cdf(nu)); }

double w1_to_points(const Cdf& target, const std::vector<double>& p) {
  const std::size_t l = p.size();
  double total = 0.0;
  double a = 0.0;
  for (std::size_t j = 0; j <= l; ++j) {
    const double b = j < l ? p[j] : 1.0;
    const double c = static_cast<double>(j) / static_cast<double>(l);
    if (b > a) {
      // Below q the target CDF is under c, above it at least c.
      const double q = std::clamp(target.quantile(c), a, b);
      const double ia = target.integral(a), iq = target.integral(q), ib = target.integral(b);
      total += c * (q - a) - (iq - ia) + (ib - iq) - c * (b - q);
    }
    a = std::max(a, b);
  }
  return total;
}

EmpiricalMeasure empirical_measure(const MapParams& map, const Quad& x0, int n, const OrbitOptions& opts) {
  if (n < 1) throw Error(ErrorCode::ConfigInvalid, "empirical measure needs n >= 1");
  OrbitOptions o = opts;
  if (o.precision_bits == 0) {
    // Enough bits that the enclosure survives n expansions by beta.
    o.precision_bits = std::max(map.precision_bits, static_cast<int>(n * std::log2(map.beta_d)) + 96);
  }
  if (o.max_precision_bits == 0) o.max_precision_bits = 4 * o.precision_bits;
  const OrbitResult r = orbit(map, x0, n - 1, o);
  return uniform_atoms(r.values);
}

EmpiricalMeasure random_orbit_measure(const MapParams& map, int n, std::uint64_t seed, Quad* start) {
  if (n < 1) throw Error(ErrorCode::ConfigInvalid, "empirical measure needs n >= 1");
  const int bits = static_cast<int>(std::ceil(n * std::log2(map.beta_d))) + 64;
  std::mt19937_64 rng(seed);
  mpz_class num = 0;
  for (int got = 0; got < bits; got += 64) num = (num << 64) + mpz_class(std::to_string(rng()));
  const int total_bits = ((bits + 63) / 64) * 64;
  mpz_class den = 1;
  den <<= total_bits;
  const Quad x0(mpq_class(num, den));
  if (start) *start = x0;
  return empirical_measure(map, x0, n);
}

double observable_average(const EmpiricalMeasure& m, const std::function<double(double)>& f) {
  double s = 0.0;
  for (const Atom& a : m.atoms) s += a.w * f(a.x);
  return s;
}

double observable_average(const EmpiricalMeasure& m, const MapParams& map, const std::vector<double>& per_symbol) {
  if (per_symbol.size() != static_cast<std::size_t>(map.k)) throw Error(ErrorCode::ConfigInvalid, "observable needs k values");
  return observable_average(m, [&](double x) { return per_symbol[static_cast<std::size_t>(eval(map, x).second - 1)]; });
}

double observable_average(const HistogramMeasure& m, const MapParams& map, const std::vector<double>& per_symbol) {
  if (per_symbol.size() != static_cast<std::size_t>(map.k)) throw Error(ErrorCode::ConfigInvalid, "observable needs k values");
  double s = 0.0;
  for (std::size_t i = 0; i < m.bins(); ++i) {
    const double lo = m.edges[i], hi = m.edges[i + 1];
    // Split the bin at the critical points it straddles.
    for (int j = 1; j <= map.k; ++j) {
      const double a = std::max(lo, map.critical_d[static_cast<std::size_t>(j - 1)]);
      const double b = std::min(hi, map.critical_d[static_cast<std::size_t>(j)]);
      if (b > a) s += m.density(i) * (b - a) * per_symbol[static_cast<std::size_t>(j - 1)];
    }
  }
  return s;
}

}  // namespace abmap
