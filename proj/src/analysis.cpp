#include "abmap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "abmap/error.hpp"
#include "abmap/simd/kernels.hpp"

namespace abmap {

namespace {

// Iterative Tarjan; emits components in reverse topological order.
std::vector<std::vector<int>> tarjan(const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(succ.size(), -1), low(succ.size(), 0);
  std::vector<char> on_stack(succ.size(), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& s = succ[static_cast<std::size_t>(f.v)];
      if (f.next < s.size()) {
        const int w = s[f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

}  // namespace

ComponentReport strongly_connected(const MarkovDiagram& d) {
  ComponentReport rep;
  auto comps = tarjan(d.succ);
  std::reverse(comps.begin(), comps.end());
  rep.component_of.assign(d.vertices.size(), -1);
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (int v : comps[i]) rep.component_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    IrreducibleComponent c;
    c.vertices = std::move(comps[i]);
    c.closed = true;
    for (int v : c.vertices) {
      for (int w : d.succ[static_cast<std::size_t>(v)]) {
        if (rep.component_of[static_cast<std::size_t>(w)] == static_cast<int>(i))
          c.cyclic = true;
        else
          c.closed = false;
      }
    }
    rep.components.push_back(std::move(c));
  }

  // Deepest n with A_n and B_n in one cyclic component.
  for (int n = d.N - 1; n >= 0 && rep.distinguished < 0; --n) {
    const int va = d.find(Tag::A, n), vb = d.find(Tag::B, n);
    if (va < 0 || vb < 0) continue;
    const int ca = rep.component_of[static_cast<std::size_t>(va)];
    if (ca != rep.component_of[static_cast<std::size_t>(vb)]) continue;
    if (!rep.components[static_cast<std::size_t>(ca)].cyclic) continue;
    rep.distinguished = ca;
  }
  if (rep.distinguished >= 0) {
    for (int n = 0; n < d.N; ++n) {
      const int va = d.find(Tag::A, n), vb = d.find(Tag::B, n);
      if (va >= 0 && vb >= 0 && rep.component_of[static_cast<std::size_t>(va)] == rep.distinguished &&
          rep.component_of[static_cast<std::size_t>(vb)] == rep.distinguished) {
        rep.n0 = n;
        break;
      }
    }
    rep.components[static_cast<std::size_t>(rep.distinguished)].deep = true;
  }
  return rep;
}

ComponentReport scc_irreducible(const MarkovDiagram& d) {
  ComponentReport rep = strongly_connected(d);
  if (rep.distinguished < 0)
    throw Error(ErrorCode::NoComponentFound,
                "no cyclic component holds both kneading lines at N=" + std::to_string(d.N));
  return rep;
}

SpectralResult perron(const std::vector<double>& a, std::size_t n, const PerronOptions& opts) {
  if (n == 0) throw Error(ErrorCode::NonConvergence, "empty matrix");
  const auto& kern = simd::kernels();
  // Shift by the largest row sum so that the iteration matrix is primitive
  // and its dominant root stays well separated from the others.
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j];
    shift = std::max(shift, s);
  }
  if (shift == 0.0) shift = 1.0;
  std::vector<double> b(a);
  for (std::size_t i = 0; i < n; ++i) b[i * n + i] += shift;

  auto run = [&](const std::vector<double>& m, SpectralResult& res, std::vector<double>& x) {
    x.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);
    double lo = 0.0, hi = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
      kern.matvec(m.data(), x.data(), y.data(), n);
      lo = INFINITY;
      hi = 0.0;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double q = y[i] / x[i];
        lo = std::min(lo, q);
        hi = std::max(hi, q);
        sum += y[i];
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / sum;
      res.iterations = it;
      res.residual = (hi - lo) / hi;
      if (res.residual <= opts.tolerance) break;
    }
    return 0.5 * (lo + hi);
  };

  SpectralResult res;
  const double mu = run(b, res, res.right);
  if (res.residual > opts.tolerance)
    throw Error(ErrorCode::NonConvergence, "power iteration residual " + std::to_string(res.residual) +
                                               " after " + std::to_string(res.iterations) + " iterations");
  res.rho = mu - shift;
  res.value = std::log(res.rho);
  if (opts.want_left) {
    std::vector<double> bt(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) bt[j * n + i] = b[i * n + j];
    SpectralResult lres;
    run(bt, lres, res.left);
    if (lres.residual > opts.tolerance)
      throw Error(ErrorCode::NonConvergence, "left power iteration did not converge");
    res.iterations = std::max(res.iterations, lres.iterations);
    res.residual = std::max(res.residual, lres.residual);
  }
  return res;
}

std::vector<double> adjacency(const MarkovDiagram& d, const IrreducibleComponent& c) {
  const std::size_t n = c.vertices.size();
  std::vector<int> local(d.vertices.size(), -1);
  for (std::size_t i = 0; i < n; ++i) local[static_cast<std::size_t>(c.vertices[i])] = static_cast<int>(i);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int w : d.succ[static_cast<std::size_t>(c.vertices[i])])
      if (local[static_cast<std::size_t>(w)] >= 0) a[i * n + static_cast<std::size_t>(local[static_cast<std::size_t>(w)])] = 1.0;
  return a;
}

SpectralResult entropy_estimate(const MarkovDiagram& d, const IrreducibleComponent& c, double tolerance) {
  if (c.vertices.empty()) throw Error(ErrorCode::NoComponentFound, "empty component");
  PerronOptions opts;
  opts.tolerance = tolerance;
  SpectralResult r = perron(adjacency(d, c), c.vertices.size(), opts);
  r.N = d.N;
  return r;
}

HistogramMeasure mme_estimate(const MarkovDiagram& d, const IrreducibleComponent& c, std::size_t bins,
                              double tolerance) {
  if (bins == 0) throw Error(ErrorCode::ConfigInvalid, "bins must be positive");
  PerronOptions opts;
  opts.tolerance = tolerance;
  opts.want_left = true;
  const SpectralResult r = perron(adjacency(d, c), c.vertices.size(), opts);
  HistogramMeasure h = uniform_bins(bins);
  std::fill(h.mass.begin(), h.mass.end(), 0.0);
  const double nb = static_cast<double>(bins);
  double total = 0.0;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    const double w = r.left[i] * r.right[i];
    const Interval& iv = d.vertices[static_cast<std::size_t>(c.vertices[i])].iv;
    const double lo = iv.lo.to_double(), hi = iv.hi.to_double();
    total += w;
    if (!(hi > lo)) continue;
    const double dens = w / (hi - lo);
    const auto b0 = static_cast<std::size_t>(std::min(nb - 1, std::floor(lo * nb)));
    const auto b1 = static_cast<std::size_t>(std::min(nb - 1, std::floor(hi * nb)));
    for (std::size_t b = b0; b <= b1; ++b) {
      const double overlap = std::min(hi, h.edges[b + 1]) - std::max(lo, h.edges[b]);
      if (overlap > 0) h.mass[b] += dens * overlap;
    }
  }
  double placed = 0.0;
  for (double m : h.mass) placed += m;
  for (double& m : h.mass) m /= placed;
  (void)total;
  return h;
}

double pressure(const MarkovDiagram& d, const IrreducibleComponent& c, const std::vector<double>& f, double t,
                double tolerance) {
  if (f.empty()) throw Error(ErrorCode::ConfigInvalid, "empty observable");
  const std::size_t n = c.vertices.size();
  auto value = [&](std::size_t i) {
    const auto sym = static_cast<std::size_t>(d.vertices[static_cast<std::size_t>(c.vertices[i])].symbol - 1);
    if (sym >= f.size()) throw Error(ErrorCode::ConfigInvalid, "observable shorter than the alphabet");
    return f[sym];
  };
  // Factor out the dominant weight so the matrix entries stay in (0, 1].
  double ref = t >= 0 ? -INFINITY : INFINITY;
  for (std::size_t i = 0; i < n; ++i) ref = t >= 0 ? std::max(ref, value(i)) : std::min(ref, value(i));
  std::vector<double> a = adjacency(d, c);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::exp(t * (value(j) - ref));
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] *= w;
  }
  PerronOptions opts;
  opts.tolerance = tolerance;
  return perron(a, n, opts).value + t * ref;
}

}  // namespace abmap
