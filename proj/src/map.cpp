#include "abmap/map.hpp"

#include <algorithm>
#include <cmath>

#include "abmap/ball.hpp"
#include "abmap/error.hpp"
#include "abmap/expr.hpp"

namespace abmap {

MapParams build_map(const Quad& alpha, const Quad& beta, const std::vector<int>& signs, int precision_bits) {
  if (!(beta > Quad(1))) throw Error(ErrorCode::BetaOutOfRange, "beta must exceed 1, got " + beta.str());
  if (alpha < Quad(0) || !(alpha < Quad(1)))
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0,1), got " + alpha.str());
  if (precision_bits < 53 || precision_bits > (1 << 22))
    throw Error(ErrorCode::ConfigInvalid, "precision_bits out of range");
  const Quad top = alpha + beta;
  const long k = top.ceil();
  if (signs.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::SignLengthMismatch,
                "expected " + std::to_string(k) + " signs, got " + std::to_string(signs.size()));
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::ConfigInvalid, "signs must be +1 or -1");
  }
  MapParams m;
  m.alpha = alpha;
  m.beta = beta;
  m.signs = signs;
  m.k = static_cast<int>(k);
  m.precision_bits = precision_bits;
  m.critical_points.reserve(static_cast<std::size_t>(k) + 1);
  m.critical_points.emplace_back(0);
  for (long i = 1; i < k; ++i) m.critical_points.push_back((Quad(i) - alpha) / beta);
  m.critical_points.emplace_back(1);
  m.alpha_d = alpha.to_double();
  m.beta_d = beta.to_double();
  for (const Quad& c : m.critical_points) m.critical_d.push_back(c.to_double());
  return m;
}

std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> out;
  for (char ch : text) {
    if (ch == '+') {
      out.push_back(1);
    } else if (ch == '-') {
      out.push_back(-1);
    } else if (ch != ' ' && ch != ',') {
      throw Error(ErrorCode::ParseError, "signs must be written with '+' and '-', got \"" + text + "\"");
    }
  }
  return out;
}

std::string signs_string(const std::vector<int>& signs) {
  std::string s;
  for (int v : signs) s.push_back(v > 0 ? '+' : '-');
  return s;
}

MapParams build_map(const std::string& alpha, const std::string& beta, const std::string& signs,
                    int precision_bits) {
  return build_map(parse_real(alpha), parse_real(beta), parse_signs(signs), precision_bits);
}

namespace {

Quad u_of(const MapParams& map, const Quad& x) { return map.alpha + map.beta * x; }

Quad branch_formula(const MapParams& map, int branch, const Quad& u) {
  return map.sign(branch) > 0 ? u - Quad(branch - 1) : Quad(branch) - u;
}

}  // namespace

int branch_of(const MapParams& map, const Quad& x) {
  const long f = u_of(map, x).floor() + 1;
  return static_cast<int>(std::clamp<long>(f, 1, map.k));
}

Quad apply_branch(const MapParams& map, int branch, const Quad& x) {
  return branch_formula(map, branch, u_of(map, x));
}

EvalResult eval(const MapParams& map, const Quad& x) {
  if (x < Quad(0) || x > Quad(1)) throw Error(ErrorCode::ConfigInvalid, "eval outside [0,1]: " + x.str());
  const Quad u = u_of(map, x);
  const int b = static_cast<int>(std::clamp<long>(u.floor() + 1, 1, map.k));
  return {branch_formula(map, b, u), b};
}

std::pair<double, int> eval(const MapParams& map, double x) {
  const double u = map.alpha_d + map.beta_d * x;
  const int b = static_cast<int>(std::clamp<double>(std::floor(u) + 1.0, 1.0, map.k));
  double y = map.sign(b) > 0 ? u - (b - 1) : b - u;
  y = std::clamp(y, 0.0, 1.0);
  return {y, b};
}

SidedResult eval_sided(const MapParams& map, const SidedPoint& p) {
  if (p.side == Side::Left && p.value.sign() <= 0) throw Error(ErrorCode::ConfigInvalid, "(0, left) is not a valid sided point");
  if (p.side == Side::Right && !(p.value < Quad(1)))
    throw Error(ErrorCode::ConfigInvalid, "(1, right) is not a valid sided point");
  const Quad u = u_of(map, p.value);
  // Right limits use u in [i-1, i), left limits u in (i-1, i].
  const long i = p.side == Side::Right ? u.floor() + 1 : u.ceil();
  const int b = static_cast<int>(std::clamp<long>(i, 1, map.k));
  const Side side = map.sign(b) > 0 ? p.side : (p.side == Side::Left ? Side::Right : Side::Left);
  return {{branch_formula(map, b, u), side}, b};
}

Interval cell(const MapParams& map, int j) { return {map.c(j - 1), map.c(j)}; }

Interval image(const MapParams& map, int branch, const Interval& iv) {
  Quad a = apply_branch(map, branch, iv.lo);
  Quad b = apply_branch(map, branch, iv.hi);
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

int cell_containing(const MapParams& map, const Interval& iv) {
  for (int j = 1; j <= map.k; ++j) {
    if (map.c(j - 1) <= iv.lo && iv.hi <= map.c(j)) return j;
  }
  return 0;
}

std::vector<std::pair<int, Interval>> split_by_cells(const MapParams& map, const Interval& iv) {
  std::vector<std::pair<int, Interval>> out;
  for (int l = 1; l <= map.k; ++l) {
    if (!(map.c(l - 1) < iv.hi)) break;
    if (!(iv.lo < map.c(l))) continue;
    Interval piece{std::max(iv.lo, map.c(l - 1)), std::min(iv.hi, map.c(l))};
    if (!piece.degenerate()) out.emplace_back(l, std::move(piece));
  }
  return out;
}

std::vector<Quad> orbit_exact(const MapParams& map, const Quad& x, int n) {
  if (n < 0) throw Error(ErrorCode::ConfigInvalid, "orbit length must be nonnegative");
  std::vector<Quad> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(x);
  for (int j = 0; j < n; ++j) out.push_back(eval(map, out.back()).y);
  return out;
}

namespace {

enum class StepStatus { Ok, Touch, Hit, Ambiguous };

bool is_interior_boundary(const MapParams& map, long i) { return i >= 1 && i <= map.k - 1; }

// One ball step. Touch: the enclosure of u meets an interior branch
// boundary without making the branch ambiguous. Hit: u is known exactly and
// equals such a boundary.
StepStatus ball_step(const MapParams& map, const Ball& alpha, const Ball& beta, Ball& x, Ball& u, int& branch) {
  u.mul(beta, x);
  u.add(alpha, u);
  const long fl = u.floor_lo();
  const long fh = u.floor_hi();
  const long b_lo = std::clamp<long>(fl + 1, 1, map.k);
  const long b_hi = std::clamp<long>(fh + 1, 1, map.k);
  if (b_lo != b_hi) return StepStatus::Ambiguous;
  StepStatus st = StepStatus::Ok;
  if (mpfr_integer_p(u.lo()) && is_interior_boundary(map, fl)) {
    st = mpfr_equal_p(u.lo(), u.hi()) ? StepStatus::Hit : StepStatus::Touch;
  }
  branch = static_cast<int>(b_lo);
  x = u;
  if (map.sign(branch) > 0) {
    x.sub_si(branch - 1);
  } else {
    x.rsub_si(branch);
  }
  x.clamp_unit();
  return st;
}

bool is_interior_critical(const MapParams& map, const Quad& x) {
  for (int i = 1; i < map.k; ++i) {
    if (x == map.c(i)) return true;
  }
  return false;
}

}  // namespace

OrbitResult orbit_checked(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts, bool strict) {
  if (n < 0) throw Error(ErrorCode::ConfigInvalid, "orbit length must be nonnegative");
  if (x < Quad(0) || x > Quad(1)) throw Error(ErrorCode::ConfigInvalid, "orbit start outside [0,1]");
  int prec = opts.precision_bits > 0 ? opts.precision_bits : map.precision_bits;
  const int cap = opts.max_precision_bits > 0 ? opts.max_precision_bits : 64 * prec;
  int first_ambiguous = -1;
  for (;;) {
    OrbitResult r;
    r.values.reserve(static_cast<std::size_t>(n) + 1);
    r.branches.reserve(static_cast<std::size_t>(n));
    Ball alpha(map.alpha, prec);
    Ball beta(map.beta, prec);
    Ball bx(x, prec);
    Ball u(prec);
    r.values.push_back(bx.mid());
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      int b = 0;
      const StepStatus st = ball_step(map, alpha, beta, bx, u, b);
      if (st == StepStatus::Ambiguous || (strict && st == StepStatus::Touch)) {
        ok = false;
        if (first_ambiguous < 0 || j < first_ambiguous) first_ambiguous = j;
        r.ambiguous_step = j;
        break;
      }
      if (st == StepStatus::Hit && r.critical_hit_step < 0) r.critical_hit_step = j;
      r.branches.push_back(b);
      r.values.push_back(bx.mid());
      r.max_radius = std::max(r.max_radius, bx.radius());
    }
    if (ok) {
      r.precision_used = prec;
      r.ambiguous_step = first_ambiguous;
      return r;
    }
    if (prec >= cap || !opts.escalate) {
      if (!opts.exact_fallback) {
        if (opts.partial_ok) {
          r.precision_used = prec;
          return r;
        }
        throw Error(ErrorCode::PrecisionExhausted,
                    "orbit enclosure meets a critical point at step " + std::to_string(first_ambiguous) +
                        " at " + std::to_string(prec) + " bits");
      }
      break;
    }
    prec = std::min(cap, prec * 2);
  }
  OrbitResult r;
  r.exact = true;
  r.ambiguous_step = first_ambiguous;
  Quad cur = x;
  r.values.push_back(cur.to_double());
  for (int j = 0; j < n; ++j) {
    if (r.critical_hit_step < 0 && is_interior_critical(map, cur)) r.critical_hit_step = j;
    EvalResult e = eval(map, cur);
    r.branches.push_back(e.branch);
    cur = std::move(e.y);
    r.values.push_back(cur.to_double());
  }
  return r;
}

OrbitResult orbit(const MapParams& map, const Quad& x, int n, const OrbitOptions& opts) {
  return orbit_checked(map, x, n, opts, false);
}

}  // namespace abmap
