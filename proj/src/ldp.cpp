#include "abmap/ldp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "abmap/error.hpp"
#include "abmap/simd/kernels.hpp"

namespace abmap {

namespace {

constexpr std::size_t kBlock = 1024;

void fit(DeviationEstimate& e, std::uint64_t samples, std::uint64_t min_count) {
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < e.n.size(); ++i) {
    const double p = e.fraction[i];
    e.log_rate[i] = p > 0 ? -std::log(p) / e.n[i] : std::numeric_limits<double>::infinity();
    if (e.count[i] < min_count) continue;
    xs.push_back(e.n[i]);
    ys.push_back(-std::log(p));
    // Delta method: var(log p_hat) = (1 - p) / (samples p).
    const double var = std::max((1 - p) / (static_cast<double>(samples) * p), 1e-300);
    ws.push_back(1.0 / var);
  }
  e.points_used = static_cast<int>(xs.size());
  if (xs.empty()) {
    e.all_zero = true;
    e.slope = std::numeric_limits<double>::infinity();
    e.band = std::numeric_limits<double>::infinity();
    return;
  }
  if (xs.size() == 1) {
    e.slope = ys[0] / xs[0];
    e.band = 2.0 * std::sqrt(1.0 / ws[0]) / xs[0];
    return;
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  e.slope = sxy / sxx;
  e.band = 2.0 * std::sqrt(1.0 / sxx);
}

}  // namespace

std::vector<DeviationEstimate> mc_deviation_rates(const MapParams& map, const std::vector<double>& observable,
                                                  const std::vector<Window>& windows, const std::vector<int>& n_list,
                                                  const McOptions& opts) {
  if (observable.size() != static_cast<std::size_t>(map.k))
    throw Error(ErrorCode::ConfigInvalid, "observable needs one value per symbol");
  if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 1 ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
    throw Error(ErrorCode::ConfigInvalid, "n_list must be strictly increasing and positive");
  for (const Window& w : windows)
    if (!(w.lo < w.hi)) throw Error(ErrorCode::ConfigInvalid, "window needs lo < hi");
  if (opts.samples == 0) throw Error(ErrorCode::ConfigInvalid, "samples must be positive");

  std::vector<double> s(static_cast<std::size_t>(map.k)), t(static_cast<std::size_t>(map.k));
  for (int i = 1; i <= map.k; ++i) {
    s[static_cast<std::size_t>(i - 1)] = map.sign(i);
    t[static_cast<std::size_t>(i - 1)] = map.sign(i) > 0 ? -(i - 1.0) : static_cast<double>(i);
  }
  simd::StepParams sp{s.data(), t.data(), observable.data(), map.k, map.alpha_d, map.beta_d, opts.jitter};
  const simd::KernelTable& kern = opts.force_scalar ? simd::scalar_kernels() : simd::kernels();

  const std::size_t W = windows.size(), Nn = n_list.size();
  const std::uint64_t blocks = (opts.samples + kBlock - 1) / kBlock;
  unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  // Integer counts per thread; the sum does not depend on the split.
  std::vector<std::vector<std::uint64_t>> counts(threads, std::vector<std::uint64_t>(W * Nn, 0));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&](unsigned id) {
    std::vector<double> x(kBlock), sum(kBlock);
    std::vector<std::uint64_t> rng(kBlock);
    auto& cnt = counts[id];
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kBlock;
      const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, opts.samples - first));
      for (std::size_t i = 0; i < len; ++i) {
        std::uint64_t st = simd::splitmix64(opts.seed ^ simd::splitmix64(first + i));
        if (st == 0) st = 0x9E3779B97F4A7C15ULL;
        rng[i] = st;
        x[i] = simd::unit_from_bits(simd::xorshift64(rng[i]));
        sum[i] = 0.0;
      }
      int done = 0;
      for (std::size_t k = 0; k < Nn; ++k) {
        const int n = n_list[k];
        kern.advance(sp, x.data(), rng.data(), sum.data(), len, n - done);
        done = n;
        for (std::size_t i = 0; i < len; ++i) {
          const double avg = sum[i] / n;
          for (std::size_t w = 0; w < W; ++w)
            if (avg >= windows[w].lo && avg <= windows[w].hi) ++cnt[w * Nn + k];
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < threads; ++id) pool.emplace_back(worker, id);
  worker(0);
  for (auto& th : pool) th.join();

  std::vector<DeviationEstimate> out(W);
  for (std::size_t w = 0; w < W; ++w) {
    DeviationEstimate& e = out[w];
    e.window = windows[w];
    e.n = n_list;
    e.count.assign(Nn, 0);
    for (const auto& c : counts)
      for (std::size_t k = 0; k < Nn; ++k) e.count[k] += c[w * Nn + k];
    for (std::size_t k = 0; k < Nn; ++k)
      e.fraction.push_back(static_cast<double>(e.count[k]) / static_cast<double>(opts.samples));
    e.log_rate.assign(Nn, 0.0);
    fit(e, opts.samples, opts.min_count);
  }
  return out;
}

DeviationEstimate mc_deviation_rate(const MapParams& map, const std::vector<double>& observable, Window window,
                                    const std::vector<int>& n_list, const McOptions& opts) {
  DeviationEstimate e = mc_deviation_rates(map, observable, {window}, n_list, opts).front();
  if (e.all_zero)
    throw Error(ErrorCode::AllZeroCounts, "no n has " + std::to_string(opts.min_count) + " hits in [" +
                                              std::to_string(window.lo) + ", " + std::to_string(window.hi) + "]");
  return e;
}

RateCurve rate_from_pressure(const MarkovDiagram& d, const IrreducibleComponent& c, const std::vector<double>& f,
                             const std::vector<double>& t_grid, const std::vector<double>& s_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::ConfigInvalid, "empty t grid");
  RateCurve rc;
  rc.h_top = entropy_estimate(d, c).value;
  double fmin = INFINITY, fmax = -INFINITY;
  for (int v : c.vertices) {
    const double x = f.at(static_cast<std::size_t>(d.vertices[static_cast<std::size_t>(v)].symbol - 1));
    fmin = std::min(fmin, x);
    fmax = std::max(fmax, x);
  }
  std::vector<double> tg(t_grid);
  std::sort(tg.begin(), tg.end());
  std::vector<double> P;
  for (double t : tg) P.push_back(pressure(d, c, f, t));
  for (double s : s_grid) {
    rc.s.push_back(s);
    if (s < fmin - 1e-15 || s > fmax + 1e-15) {
      rc.rate.push_back(std::numeric_limits<double>::infinity());
      rc.t_star.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    auto g = [&](double t, double Pt) { return t * s - (Pt - rc.h_top); };
    std::size_t best = 0;
    for (std::size_t i = 1; i < tg.size(); ++i)
      if (g(tg[i], P[i]) > g(tg[best], P[best])) best = i;
    double val = g(tg[best], P[best]), tstar = tg[best];
    if (tg.size() >= 2) {
      // g is concave in t, so the maximum lies between the grid neighbours.
      double lo = tg[best == 0 ? 0 : best - 1], hi = tg[std::min(best + 1, tg.size() - 1)];
      const double phi = (std::sqrt(5.0) - 1) / 2;
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double g1 = g(x1, pressure(d, c, f, x1)), g2 = g(x2, pressure(d, c, f, x2));
      for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        if (g1 < g2) {
          lo = x1;
          x1 = x2;
          g1 = g2;
          x2 = lo + phi * (hi - lo);
          g2 = g(x2, pressure(d, c, f, x2));
        } else {
          hi = x2;
          x2 = x1;
          g2 = g1;
          x1 = hi - phi * (hi - lo);
          g1 = g(x1, pressure(d, c, f, x1));
        }
      }
      if (std::max(g1, g2) > val) {
        val = std::max(g1, g2);
        tstar = g1 > g2 ? x1 : x2;
      }
    }
    if (val < 0 && val > -1e-9) val = 0.0;
    rc.rate.push_back(val);
    rc.t_star.push_back(tstar);
  }
  return rc;
}

double window_rate(const RateCurve& curve, Window w) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.s.size(); ++i)
    if (curve.s[i] >= w.lo && curve.s[i] <= w.hi) best = std::min(best, curve.rate[i]);
  // Window endpoints by interpolation.
  for (double e : {w.lo, w.hi}) {
    for (std::size_t i = 0; i + 1 < curve.s.size(); ++i) {
      if (curve.s[i] <= e && e <= curve.s[i + 1] && std::isfinite(curve.rate[i]) && std::isfinite(curve.rate[i + 1])) {
        const double u = (e - curve.s[i]) / (curve.s[i + 1] - curve.s[i]);
        best = std::min(best, curve.rate[i] + u * (curve.rate[i + 1] - curve.rate[i]));
      }
    }
  }
  return best;
}

}  // namespace abmap
