#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abmap/analysis.hpp"
#include "abmap/error.hpp"
#include "abmap/ldp.hpp"
#include "abmap/periodic.hpp"
#include "json.hpp"

namespace abmap::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string word_string(const Word& w) {
  const bool wide = std::any_of(w.begin(), w.end(), [](int x) { return x > 9; });
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

json word_json(const Word& w) { return json(w); }

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::OutputUnwritable, "cannot create " + dir_.string() + ": " + ec.message());
  }

  /// Temp file plus rename, so a file is either complete or absent.
  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp." + std::to_string(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::OutputUnwritable, "cannot write " + tmp.string());
      out << content;
      out.flush();
      if (!out) throw Error(ErrorCode::OutputUnwritable, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::OutputUnwritable, "cannot rename onto " + target.string());
    }
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

int default_precision() {
  if (const char* env = std::getenv("ABMAP_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 64 || v > 1 << 20)
      throw Error(ErrorCode::ConfigInvalid, "ABMAP_PRECISION must be an integer in [64, 1048576]");
    return static_cast<int>(v);
  }
  return 256;
}

json defaults(const std::string& cmd) {
  json c;
  c["map"] = {{"alpha", "0"}, {"beta", "2"}, {"signs", "++"}, {"precision_bits", default_precision()}};
  c["seed"] = 1;
  if (cmd == "kneading") c["depth"] = 64;
  if (cmd == "cuttimes") {
    c["depth"] = 64;
    c["horizon"] = 64;
  }
  if (cmd == "diagram") {
    c["N"] = 10;
    c["format"] = "both";
  }
  if (cmd == "entropy") {
    c["N"] = 40;
    c["N_list"] = json::array();
    c["tolerance"] = 1e-12;
  }
  if (cmd == "mme") {
    c["N"] = 40;
    c["bins"] = 1024;
    c["tolerance"] = 1e-12;
  }
  if (cmd == "periodic") {
    c["target"] = "orbit";
    c["orbit_length"] = 20000;
    c["N"] = 40;
    c["bins"] = 1024;
    c["max_len"] = 40;
    c["max_len_list"] = json::array();
    c["budget"] = 100000;
    c["per_length"] = 2500;
  }
  if (cmd == "check-hr") {
    c["depth"] = 128;
    c["N0"] = nullptr;
    c["N1"] = nullptr;
    c["budget"] = 1000000;
  }
  if (cmd == "density") {
    c["orbit_length"] = 20000;
    c["bins"] = 64;
  }
  if (cmd == "ldp") {
    c["observable"] = json::array();
    c["windows"] = json::array({json::array({0.25, 0.35}), json::array({0.45, 0.55}), json::array({0.65, 0.75})});
    c["n_list"] = json::array({128, 256, 512, 1024, 2048, 4096});
    c["samples"] = 1000000;
    c["N"] = 40;
    c["t_range"] = json::array({-10.0, 10.0, 0.25});
    c["s_step"] = 0.01;
  }
  return c;
}

void merge(json& into, const json& from, const std::string& where) {
  for (auto it = from.begin(); it != from.end(); ++it) {
    if (!into.contains(it.key()))
      throw Error(ErrorCode::ConfigInvalid, "unknown key '" + where + it.key() + "' for this command");
    if (into[it.key()].is_object() && it->is_object())
      merge(into[it.key()], *it, where + it.key() + ".");
    else
      into[it.key()] = *it;
  }
}

template <class T>
T get(const json& c, const char* key) {
  try {
    return c.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string as_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw Error(ErrorCode::ConfigInvalid, "map parameters must be strings or numbers");
}

MapParams make_map(const json& c) {
  const json& m = c.at("map");
  return build_map(as_text(m.at("alpha")), as_text(m.at("beta")), get<std::string>(m, "signs"),
                   get<int>(m, "precision_bits"));
}

struct DiagramBundle {
  KneadingData kd;
  CutTimes ct;
  MarkovDiagram d;
};

DiagramBundle diagram_at(const MapParams& map, int N) {
  if (N < 1) throw Error(ErrorCode::ConfigInvalid, "N must be positive");
  DiagramBundle b;
  b.kd = kneading_sequences(map, N + 2);
  b.ct = cut_times(map, b.kd, N + 1);
  b.d = build_diagram(map, b.ct, N);
  return b;
}

std::string tag_text(const VertexLabel& l) {
  switch (l.tag) {
    case Tag::A: return "A" + std::to_string(l.n);
    case Tag::B: return "B" + std::to_string(l.n);
    case Tag::Base: return "[" + std::to_string(l.n) + "]";
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_kneading(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const int depth = get<int>(c, "depth");
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "depth must be positive");
  const KneadingData kd = kneading_sequences(map, depth);
  json j;
  j["a"] = word_json(kd.a);
  j["b"] = word_json(kd.b);
  j["crit_right"] = json::array();
  j["crit_left"] = json::array();
  for (int i = 1; i < map.k; ++i) {
    j["crit_right"].push_back(word_json(kd.crit_right[static_cast<std::size_t>(i)]));
    j["crit_left"].push_back(word_json(kd.crit_left[static_cast<std::size_t>(i)]));
  }
  j["depth"] = kd.depth;
  j["precision_used"] = kd.precision_used;
  out.write("kneading.json", j.dump(2) + "\n");
  return 0;
}

int cmd_cuttimes(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const int depth = get<int>(c, "depth");
  if (depth < 1) throw Error(ErrorCode::ConfigInvalid, "depth must be positive");
  const KneadingData kd = kneading_sequences(map, depth + 1);
  const CutTimes ct = cut_times(map, kd, depth);
  const Classification cl = classify(kd, ct, get<int>(c, "horizon"));
  std::ostringstream s;
  s << "m,R_m,S_m,r_m,s_m,class,case_a,case_b\n";
  const std::size_t M = std::max(ct.R.size(), ct.S.size());
  auto cell = [](const std::vector<int>& v, std::size_t m) { return m < v.size() ? std::to_string(v[m]) : std::string(); };
  for (std::size_t m = 0; m < M; ++m) {
    std::string cls;
    if (m >= 1 && m < ct.R.size()) cls += cl.in_A1(static_cast<int>(m)) ? "A1" : "A2";
    if (m >= 1 && m < ct.S.size()) cls += std::string(cls.empty() ? "" : " ") + (cl.in_B1(static_cast<int>(m)) ? "B1" : "B2");
    const std::string ca = m >= 1 && m < ct.R.size() ? std::string(to_string(cl.case_of(Line::A, static_cast<int>(m)))) : "";
    const std::string cb = m >= 1 && m < ct.S.size() ? std::string(to_string(cl.case_of(Line::B, static_cast<int>(m)))) : "";
    s << m << ',' << cell(ct.R, m) << ',' << cell(ct.S, m) << ',' << (m >= 1 ? cell(ct.r, m) : "") << ','
      << (m >= 1 ? cell(ct.s, m) : "") << ',' << cls << ',' << ca << ',' << cb << '\n';
  }
  out.write("cuttimes.csv", s.str());
  return 0;
}

int cmd_diagram(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const std::string fmt = get<std::string>(c, "format");
  if (fmt != "dot" && fmt != "json" && fmt != "both") throw Error(ErrorCode::ConfigInvalid, "format must be dot, json or both");
  const DiagramBundle b = diagram_at(map, get<int>(c, "N"));
  const MarkovDiagram& d = b.d;
  if (fmt != "json") {
    std::ostringstream s;
    s << "digraph markov {\n";
    for (int v = 0; v < d.size(); ++v) {
      const Vertex& vx = d.vertices[static_cast<std::size_t>(v)];
      std::string tags;
      for (const VertexLabel& l : vx.labels) tags += (tags.empty() ? "" : " ") + tag_text(l);
      s << "  v" << v << " [label=\"[" << num(vx.iv.lo.to_double()) << ", " << num(vx.iv.hi.to_double()) << "]\\n"
        << tags << "\"];\n";
    }
    for (int v = 0; v < d.size(); ++v)
      for (int w : d.succ[static_cast<std::size_t>(v)]) s << "  v" << v << " -> v" << w << ";\n";
    s << "}\n";
    out.write("diagram.dot", s.str());
  }
  if (fmt != "dot") {
    json j;
    j["N"] = d.N;
    j["vertices"] = json::array();
    for (int v = 0; v < d.size(); ++v) {
      const Vertex& vx = d.vertices[static_cast<std::size_t>(v)];
      json jv;
      jv["id"] = v;
      jv["lo"] = vx.iv.lo.str();
      jv["hi"] = vx.iv.hi.str();
      jv["symbol"] = vx.symbol;
      jv["labels"] = json::array();
      for (const VertexLabel& l : vx.labels) jv["labels"].push_back(tag_text(l));
      jv["succ"] = d.succ[static_cast<std::size_t>(v)];
      j["vertices"].push_back(jv);
    }
    out.write("diagram.json", j.dump(2) + "\n");
  }
  return 0;
}

int cmd_entropy(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const int N = get<int>(c, "N");
  std::vector<int> Ns = get<std::vector<int>>(c, "N_list");
  if (Ns.empty()) {
    for (int n = 5; n < N; n *= 2) Ns.push_back(n);
    Ns.push_back(N);
  }
  std::ostringstream s;
  s << "N,estimate,residual\n";
  for (int n : Ns) {
    const DiagramBundle b = diagram_at(map, n);
    const ComponentReport rep = scc_irreducible(b.d);
    const SpectralResult r = entropy_estimate(b.d, rep.main(), get<double>(c, "tolerance"));
    s << n << ',' << num(r.value) << ',' << num(r.residual) << '\n';
  }
  out.write("entropy.csv", s.str());
  return 0;
}

int cmd_mme(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const DiagramBundle b = diagram_at(map, get<int>(c, "N"));
  const ComponentReport rep = scc_irreducible(b.d);
  const HistogramMeasure h = mme_estimate(b.d, rep.main(), get<std::size_t>(c, "bins"), get<double>(c, "tolerance"));
  std::ostringstream s;
  s << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < h.bins(); ++i) s << num(h.edges[i]) << ',' << num(h.edges[i + 1]) << ',' << num(h.mass[i]) << '\n';
  out.write("mme.csv", s.str());
  return 0;
}

EmpiricalMeasure histogram_atoms(const HistogramMeasure& h) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < h.bins(); ++i)
    if (h.mass[i] > 0) atoms.push_back({0.5 * (h.edges[i] + h.edges[i + 1]), h.mass[i]});
  return make_measure(std::move(atoms));
}

int cmd_periodic(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const std::string target_kind = get<std::string>(c, "target");
  EmpiricalMeasure target;
  if (target_kind == "orbit") {
    target = random_orbit_measure(map, get<int>(c, "orbit_length"), get<std::uint64_t>(c, "seed"));
  } else if (target_kind == "mme") {
    const DiagramBundle b = diagram_at(map, get<int>(c, "N"));
    const ComponentReport rep = scc_irreducible(b.d);
    target = histogram_atoms(mme_estimate(b.d, rep.main(), get<std::size_t>(c, "bins")));
  } else {
    throw Error(ErrorCode::ConfigInvalid, "target must be 'orbit' or 'mme'");
  }
  std::vector<int> lens = get<std::vector<int>>(c, "max_len_list");
  if (lens.empty()) lens.push_back(get<int>(c, "max_len"));
  std::ostringstream s;
  s << "max_len,word,period,points,distance,candidates\n";
  for (int L : lens) {
    ApproxOptions o;
    o.max_len = L;
    o.budget = get<std::size_t>(c, "budget");
    o.per_length = get<std::size_t>(c, "per_length");
    const ApproxResult r = approximate_by_periodic(map, target, o);
    std::string pts;
    for (std::size_t i = 0; i < r.orbit.points_d.size(); ++i) pts += (i ? " " : "") + num(r.orbit.points_d[i]);
    s << L << ',' << word_string(r.orbit.word) << ',' << r.orbit.word.size() << ',' << pts << ',' << num(r.distance)
      << ',' << r.candidates << '\n';
  }
  out.write("periodic.csv", s.str());
  return 0;
}

int cmd_check_hr(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const int depth = get<int>(c, "depth");
  const DiagramBundle b = diagram_at(map, depth);
  const Classification cl = classify(b.kd, b.ct);
  const ComponentReport rep = scc_irreducible(b.d);
  const HrContext ctx(map, b.kd, b.ct, cl, b.d, rep);
  HrPolicy pol;
  const bool explicit_N = !c.at("N0").is_null();
  if (explicit_N) {
    pol.N0 = get<int>(c, "N0");
    pol.N1 = c.at("N1").is_null() ? pol.N0 + default_hr_policy(ctx).n1 : get<int>(c, "N1");
  } else {
    pol = default_hr_policy(ctx);
  }
  const std::size_t budget = get<std::size_t>(c, "budget");
  std::ostringstream s;
  s << "line,j,case,m,|u|,slack,status\n";
  bool failed = false;
  const bool hopeless = pol.N0 >= depth;
  for (Line line : {Line::A, Line::B}) {
    const auto& X = b.ct.cuts(line);
    const char* ln = line == Line::A ? "a" : "b";
    for (int j = 1; j < static_cast<int>(X.size()) && X[static_cast<std::size_t>(j)] <= depth / 2; ++j) {
      const std::string kase(to_string(cl.case_of(line, j)));
      if (hopeless) {
        s << ln << ',' << j << ',' << kase << ",,,,DepthExceeded\n";
        failed = true;
        continue;
      }
      if (X[static_cast<std::size_t>(j)] <= pol.N0) {
        s << ln << ',' << j << ',' << kase << ",,,,below-N0\n";
        continue;
      }
      try {
        const HRWitness w = hr_witness(ctx, line, j, pol.N0, pol.N1, budget);
        const bool ok = verify_witness(ctx, w, pol.N1);
        failed |= !ok;
        s << ln << ',' << j << ',' << kase << ',' << w.m << ',' << w.u.size() << ',' << w.slack << ','
          << (ok ? (w.constructed ? "ok-construction" : "ok-search") : "verify-failed") << '\n';
      } catch (const Error& e) {
        failed = true;
        s << ln << ',' << j << ',' << kase << ",,,," << to_string(e.code()) << '\n';
      }
    }
  }
  out.write("check_hr.csv", s.str());
  json p;
  p["n0"] = rep.n0;
  p["N0"] = pol.N0;
  p["N1"] = pol.N1;
  out.write("check_hr_policy.json", p.dump(2) + "\n");
  return failed ? 2 : 0;
}

int cmd_density(const json& c, Output& out) {
  const MapParams map = make_map(c);
  const EmpiricalMeasure mu = random_orbit_measure(map, get<int>(c, "orbit_length"), get<std::uint64_t>(c, "seed"));
  const std::size_t bins = get<std::size_t>(c, "bins");
  if (bins == 0) throw Error(ErrorCode::ConfigInvalid, "bins must be positive");
  std::vector<double> mass(bins, 0.0);
  for (const Atom& a : mu.atoms)
    mass[std::min(bins - 1, static_cast<std::size_t>(a.x * static_cast<double>(bins)))] += a.w;
  std::ostringstream s;
  s << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < bins; ++i)
    s << num(static_cast<double>(i) / bins) << ',' << num(static_cast<double>(i + 1) / bins) << ',' << num(mass[i]) << '\n';
  out.write("density.csv", s.str());
  std::ostringstream m;
  m << "position,weight\n";
  for (const Atom& a : mu.atoms) m << num(a.x) << ',' << num(a.w) << '\n';
  out.write("orbit_measure.csv", m.str());
  return 0;
}

int cmd_ldp(const json& c, Output& out) {
  const MapParams map = make_map(c);
  std::vector<double> f = get<std::vector<double>>(c, "observable");
  if (f.empty()) {
    // Frequency of the last symbol.
    f.assign(static_cast<std::size_t>(map.k), 0.0);
    f.back() = 1.0;
  }
  std::vector<Window> windows;
  for (const auto& w : c.at("windows")) {
    if (!w.is_array() || w.size() != 2) throw Error(ErrorCode::ConfigInvalid, "windows are [lo, hi] pairs");
    windows.push_back({w[0].get<double>(), w[1].get<double>()});
  }
  McOptions o;
  o.samples = get<std::uint64_t>(c, "samples");
  o.seed = get<std::uint64_t>(c, "seed");
  const auto est = mc_deviation_rates(map, f, windows, get<std::vector<int>>(c, "n_list"), o);

  const DiagramBundle b = diagram_at(map, get<int>(c, "N"));
  const ComponentReport rep = scc_irreducible(b.d);
  const auto tr = get<std::vector<double>>(c, "t_range");
  if (tr.size() != 3 || !(tr[2] > 0) || !(tr[0] < tr[1])) throw Error(ErrorCode::ConfigInvalid, "t_range is [lo, hi, step]");
  std::vector<double> tg, sg;
  for (int i = 0; tr[0] + i * tr[2] <= tr[1] + 1e-12; ++i) tg.push_back(tr[0] + i * tr[2]);
  const double fmin = *std::min_element(f.begin(), f.end()), fmax = *std::max_element(f.begin(), f.end());
  const double step = get<double>(c, "s_step");
  if (!(step > 0)) throw Error(ErrorCode::ConfigInvalid, "s_step must be positive");
  for (int i = 0; fmin + i * step <= fmax + 1e-12; ++i) sg.push_back(fmin + i * step);
  for (const Window& w : windows)
    for (double e : {w.lo, w.hi})
      if (e >= fmin && e <= fmax) sg.push_back(e);
  std::sort(sg.begin(), sg.end());
  sg.erase(std::unique(sg.begin(), sg.end(), [](double x, double y) { return std::fabs(x - y) < 1e-12; }), sg.end());
  const RateCurve rc = rate_from_pressure(b.d, rep.main(), f, tg, sg);

  std::ostringstream mc;
  mc << "window_lo,window_hi,n,count,fraction,log_rate\n";
  std::ostringstream sum;
  sum << "window_lo,window_hi,slope,band,points_used,I_legendre,status\n";
  bool zero = false;
  for (const auto& e : est) {
    for (std::size_t i = 0; i < e.n.size(); ++i)
      mc << num(e.window.lo) << ',' << num(e.window.hi) << ',' << e.n[i] << ',' << e.count[i] << ','
         << num(e.fraction[i]) << ',' << num(e.log_rate[i]) << '\n';
    zero |= e.all_zero;
    sum << num(e.window.lo) << ',' << num(e.window.hi) << ',' << num(e.slope) << ',' << num(e.band) << ','
        << e.points_used << ',' << num(window_rate(rc, e.window)) << ',' << (e.all_zero ? "AllZeroCounts" : "ok") << '\n';
  }
  std::ostringstream rate;
  rate << "s,I_legendre\n";
  for (std::size_t i = 0; i < rc.s.size(); ++i) rate << num(rc.s[i]) << ',' << num(rc.rate[i]) << '\n';
  out.write("ldp_mc.csv", mc.str());
  out.write("ldp_summary.csv", sum.str());
  out.write("ldp_rate.csv", rate.str());
  return zero ? 2 : 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Markov diagrams, entropy, periodic orbits and large deviations for generalized (alpha, beta)-maps"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, out_dir = ".", alpha, beta, signs;
  int precision = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file; flags given on the command line override it");
  auto* o_out = app.add_option("--out", out_dir, "Output directory (created if missing)")->capture_default_str();
  auto* o_alpha = app.add_option("--alpha", alpha, "alpha in [0,1): decimal, p/q, sqrt(...) or root(a,b,c)");
  auto* o_beta = app.add_option("--beta", beta, "beta > 1, same syntax as --alpha");
  auto* o_signs = app.add_option("--signs", signs, "branch orientations, one of + or - per branch, e.g. +-+");
  auto* o_prec = app.add_option("--precision", precision,
                                "working precision in bits (default from ABMAP_PRECISION, else 256)");
  auto* o_seed = app.add_option("--seed", seed, "seed for every random choice of the run");

  struct Flag {
    std::string key;
    CLI::Option* opt;
    std::function<json()> value;
  };
  std::vector<Flag> flags;
  std::map<std::string, CLI::App*> subs;
  // Storage that outlives parsing for the per-command options.
  std::map<std::string, int> ints;
  std::map<std::string, double> doubles;
  std::map<std::string, std::string> strings;
  std::map<std::string, std::vector<int>> int_lists;
  std::map<std::string, std::vector<double>> double_lists;

  auto add_int = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    const std::string id = sub->get_name() + "." + key;
    auto* opt = sub->add_option("--" + key, ints[id], help);
    flags.push_back({sub->get_name() + ":" + key, opt, [&ints, id] { return json(ints[id]); }});
  };
  auto add_double = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    const std::string id = sub->get_name() + "." + key;
    auto* opt = sub->add_option("--" + key, doubles[id], help);
    flags.push_back({sub->get_name() + ":" + key, opt, [&doubles, id] { return json(doubles[id]); }});
  };
  auto add_string = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    const std::string id = sub->get_name() + "." + key;
    auto* opt = sub->add_option("--" + key, strings[id], help);
    flags.push_back({sub->get_name() + ":" + key, opt, [&strings, id] { return json(strings[id]); }});
  };
  auto add_ints = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    const std::string id = sub->get_name() + "." + key;
    auto* opt = sub->add_option("--" + key, int_lists[id], help)->delimiter(',');
    flags.push_back({sub->get_name() + ":" + key, opt, [&int_lists, id] { return json(int_lists[id]); }});
  };
  auto add_doubles = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    const std::string id = sub->get_name() + "." + key;
    auto* opt = sub->add_option("--" + key, double_lists[id], help)->delimiter(',');
    flags.push_back({sub->get_name() + ":" + key, opt, [&double_lists, id] { return json(double_lists[id]); }});
  };

  auto* kn = subs["kneading"] = app.add_subcommand("kneading", "Kneading sequences as JSON");
  add_int(kn, "depth", "number of symbols per sequence (default 64)");

  auto* cu = subs["cuttimes"] = app.add_subcommand("cuttimes", "Cut times and index classes as CSV");
  add_int(cu, "depth", "largest cut time examined (default 64)");
  add_int(cu, "horizon", "terms compared when splitting the last case (default 64)");

  auto* di = subs["diagram"] = app.add_subcommand("diagram", "Merged Markov diagram as DOT and/or JSON");
  add_int(di, "N", "truncation depth (default 10)");
  add_string(di, "format", "dot, json or both (default both)");

  auto* en = subs["entropy"] = app.add_subcommand("entropy", "Truncated entropy estimates as CSV");
  add_int(en, "N", "deepest truncation (default 40)");
  add_ints(en, "N_list", "explicit comma-separated truncations; default 5,10,20,... then N");
  add_double(en, "tolerance", "power-iteration tolerance (default 1e-12)");

  auto* mm = subs["mme"] = app.add_subcommand("mme", "Measure of maximal entropy as a CSV histogram");
  add_int(mm, "N", "truncation depth (default 40)");
  add_int(mm, "bins", "histogram bins (default 1024)");
  add_double(mm, "tolerance", "power-iteration tolerance (default 1e-12)");

  auto* pe = subs["periodic"] = app.add_subcommand("periodic", "Closest periodic orbit measure to a target");
  add_string(pe, "target", "'orbit' (random orbit measure) or 'mme' (default orbit)");
  add_int(pe, "orbit_length", "length of the random orbit target (default 20000)");
  add_int(pe, "N", "truncation for the mme target (default 40)");
  add_int(pe, "bins", "bins for the mme target (default 1024)");
  add_int(pe, "max_len", "longest period searched (default 40)");
  add_ints(pe, "max_len_list", "comma-separated list of max_len values, one CSV row each");
  add_int(pe, "budget", "candidate words scored in total (default 100000)");
  add_int(pe, "per_length", "candidate words scored per period (default 2500)");

  auto* hr = subs["check-hr"] = app.add_subcommand("check-hr", "Shadowing witnesses for every cut index as CSV");
  add_int(hr, "depth", "diagram depth; indices with cut time <= depth/2 are checked (default 128)");
  add_int(hr, "N0", "override N0 (default from the distinguished component)");
  add_int(hr, "N1", "override N1 (default N0 + n1)");
  add_int(hr, "budget", "search expansions per index (default 1000000)");

  auto* de = subs["density"] = app.add_subcommand("density", "Histogram of a Lebesgue-random orbit");
  add_int(de, "orbit_length", "orbit length (default 20000)");
  add_int(de, "bins", "histogram bins (default 64)");

  auto* ld = subs["ldp"] = app.add_subcommand("ldp", "Monte-Carlo decay rates and the Legendre rate curve");
  add_doubles(ld, "observable", "comma-separated value per symbol (default: indicator of the last symbol)");
  add_doubles(ld, "windows", "comma-separated lo,hi pairs");
  add_ints(ld, "n_list", "comma-separated increasing orbit lengths (default 128,...,4096)");
  add_int(ld, "samples", "number of Lebesgue samples (default 1000000)");
  add_int(ld, "N", "truncation for the pressure (default 40)");
  add_doubles(ld, "t_range", "lo,hi,step of the t grid (default -10,10,0.25)");
  add_double(ld, "s_step", "spacing of the s grid (default 0.01)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::string cmd;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cmd = name;

  try {
    json cfg = defaults(cmd);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config " + config_path);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
      }
      if (!file.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
      file.erase("command");
      if (file.contains("out")) {
        if (!o_out->count()) out_dir = file["out"].get<std::string>();
        file.erase("out");
      }
      merge(cfg, file, "");
    }
    if (o_alpha->count()) cfg["map"]["alpha"] = alpha;
    if (o_beta->count()) cfg["map"]["beta"] = beta;
    if (o_signs->count()) cfg["map"]["signs"] = signs;
    if (o_prec->count()) cfg["map"]["precision_bits"] = precision;
    if (o_seed->count()) cfg["seed"] = seed;
    for (const Flag& f : flags) {
      const auto colon = f.key.find(':');
      if (f.key.substr(0, colon) != cmd || !f.opt->count()) continue;
      const std::string key = f.key.substr(colon + 1);
      json v = f.value();
      if (cmd == "ldp" && key == "windows") {
        const auto flat = v.get<std::vector<double>>();
        if (flat.size() % 2 != 0) throw Error(ErrorCode::ConfigInvalid, "--windows takes lo,hi pairs");
        v = json::array();
        for (std::size_t i = 0; i < flat.size(); i += 2) v.push_back(json::array({flat[i], flat[i + 1]}));
      }
      cfg[key] = v;
    }

    Output out{fs::path(out_dir)};
    int status = 0;
    if (cmd == "kneading") status = cmd_kneading(cfg, out);
    if (cmd == "cuttimes") status = cmd_cuttimes(cfg, out);
    if (cmd == "diagram") status = cmd_diagram(cfg, out);
    if (cmd == "entropy") status = cmd_entropy(cfg, out);
    if (cmd == "mme") status = cmd_mme(cfg, out);
    if (cmd == "periodic") status = cmd_periodic(cfg, out);
    if (cmd == "check-hr") status = cmd_check_hr(cfg, out);
    if (cmd == "density") status = cmd_density(cfg, out);
    if (cmd == "ldp") status = cmd_ldp(cfg, out);

    json manifest;
    manifest["version"] = kVersion;
    manifest["command"] = cmd;
    manifest["config"] = cfg;
    manifest["outputs"] = out.files();
    manifest["status"] = status;
    out.write("manifest.json", manifest.dump(2) + "\n");
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_domain_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace abmap::cli
