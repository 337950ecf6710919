#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "newmc/exponents.hpp"
#include "newmc/quaternion.hpp"
#include "newmc/statphase.hpp"

namespace newmc::runner {

using nlohmann::json;

namespace {

// ---- config access with field paths ----

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

i64 get_int(const json& j, const std::string& key, const std::string& path, std::optional<i64> def = std::nullopt) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(path + key + ": required integer is missing");
  }
  if (!v->is_number_integer()) throw ConfigError(path + key + ": expected an integer");
  return v->get<i64>();
}

double get_double(const json& j, const std::string& key, const std::string& path, std::optional<double> def = std::nullopt) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(path + key + ": required number is missing");
  }
  if (!v->is_number()) throw ConfigError(path + key + ": expected a number");
  return v->get<double>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path,
                       std::optional<std::string> def = std::nullopt) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(path + key + ": required string is missing");
  }
  if (!v->is_string()) throw ConfigError(path + key + ": expected a string");
  return v->get<std::string>();
}

Rational parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<i64>());
  if (!v.is_string()) throw ConfigError(where + ": expected an integer or a string \"p/q\"");
  const auto s = v.get<std::string>();
  try {
    std::size_t pos = 0;
    const i64 num = std::stoll(s, &pos);
    if (pos == s.size()) return Rational(num);
    if (s[pos] != '/') throw ConfigError(where + ": cannot parse \"" + s + "\"");
    const std::string rest = s.substr(pos + 1);
    std::size_t pos2 = 0;
    const i64 den = std::stoll(rest, &pos2);
    if (pos2 != rest.size() || den == 0) throw ConfigError(where + ": cannot parse \"" + s + "\"");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw ConfigError(where + ": cannot parse \"" + s + "\"");
  }
}

Rational get_rational(const json& j, const std::string& key, const std::string& path,
                      std::optional<Rational> def = std::nullopt) {
  const json* v = find(j, key);
  if (!v) {
    if (def) return *def;
    throw ConfigError(path + key + ": required rational is missing");
  }
  return parse_rational(*v, path + key);
}

struct SpecParams {
  i64 p = 3;
  int n = 6;
  Family family = Family::PrincipalSeries;
  i64 choice = 0;
};

SpecParams parse_spec(const json& j, const std::string& path) {
  SpecParams s;
  s.p = get_int(j, "p", path);
  s.n = static_cast<int>(get_int(j, "n", path));
  const auto fam = get_string(j, "family", path, "ps");
  try {
    s.family = parse_family(fam);
  } catch (const std::invalid_argument&) {
    throw ConfigError(path + "family: expected ps, sc-unramified or sc-ramified, got \"" + fam + "\"");
  }
  s.choice = get_int(j, "choice", path, 0);
  if (s.p < 3 || !is_prime(s.p)) throw ConfigError(path + "p: must be an odd prime");
  if (s.p > 13) throw ConfigError(path + "p: at most 13 is supported");
  if (s.choice < 0) throw ConfigError(path + "choice: must be nonnegative");
  switch (s.family) {
    case Family::PrincipalSeries:
      if (s.n % 2 != 0 || s.n < 4) throw ConfigError(path + "n: principal series needs even n >= 4");
      break;
    case Family::SupercuspidalUnramified:
      if (s.n % 2 != 0 || s.n < 4) throw ConfigError(path + "n: unramified supercuspidal needs even n >= 4");
      break;
    case Family::SupercuspidalRamified:
      if (s.n % 2 != 1 || s.n < 3) throw ConfigError(path + "n: ramified supercuspidal needs odd n >= 3");
      break;
  }
  if (s.n > 10) throw ConfigError(path + "n: at most 10 is supported");
  return s;
}

ReprSpec build_spec(const SpecParams& s) {
  try {
    return makeSpec(s.p, s.n, s.family, s.choice);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::pair<int, int> get_i_range(const json& j, int lo_default, int hi_default, int lo_min, int hi_max) {
  const json* v = find(j, "i_range");
  if (!v) return {lo_default, hi_default};
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
    throw ConfigError("config.i_range: expected [lo, hi]");
  const int lo = (*v)[0].get<int>(), hi = (*v)[1].get<int>();
  if (lo > hi || lo < lo_min || hi > hi_max)
    throw ConfigError("config.i_range: must satisfy " + std::to_string(lo_min) + " <= lo <= hi <= " +
                      std::to_string(hi_max));
  return {lo, hi};
}

// ---- formatting ----

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string point_cols(const GridPoint& g) {
  std::ostringstream o;
  o << g.v_a << ',' << g.a_unit << ',' << (g.m_zero ? std::string("inf") : std::to_string(g.v_m)) << ','
    << (g.m_zero ? 0 : g.m_unit);
  return o.str();
}

std::string spec_cols(const SpecParams& s) {
  return std::to_string(s.p) + "," + std::to_string(s.n) + "," + family_name(s.family);
}

// deterministic parallel map: results land in index order
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, static_cast<std::size_t>(threads)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < count; k += workers) f(k);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

int threads_of(const json& cfg) {
  const i64 t = get_int(cfg, "threads", "config.", 1);
  if (t < 1 || t > 256) throw ConfigError("config.threads: must be in 1..256");
  return static_cast<int>(t);
}

std::uint64_t seed_of(const json& cfg) {
  const i64 s = get_int(cfg, "seed", "config.", 1);
  if (s < 0) throw ConfigError("config.seed: must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

double bound_of(const ReprSpec& s) {
  const double q = static_cast<double>(s.p());
  return s.is_ps() ? 2 * q * q : q * q * q;
}

// ---- tasks ----

TaskOutput task_verify_support(const json& cfg) {
  const auto sp = parse_spec(cfg, "config.");
  const auto spec = build_spec(sp);
  const auto [lo, hi] = get_i_range(cfg, spec.n0() + 1, sp.n, spec.n0() + 1, sp.n);
  const i64 points = get_int(cfg, "grid_points", "config.", 200);
  if (points < 1 || points > 100000) throw ConfigError("config.grid_points: must be in 1..100000");
  const auto seed = seed_of(cfg);
  PhiEvaluator ev(spec);
  std::vector<SupportReport> reps(static_cast<std::size_t>(hi - lo + 1));
  parallel_for(reps.size(), threads_of(cfg), [&](std::size_t k) {
    const int i = lo + static_cast<int>(k);
    reps[k] = verifySupport(ev, i, support_grid(spec, i, static_cast<int>(points), seed + static_cast<std::uint64_t>(i)));
  });
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,i,v_a,a_unit,v_m,m_unit,expected_zero,exact_zero,violation\n";
  rep << "verify-support " << spec_cols(sp) << "\n";
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const int i = lo + static_cast<int>(k);
    for (const auto& r : reps[k].rows)
      csv << spec_cols(sp) << ',' << i << ',' << point_cols(r.point) << ',' << r.expected_zero << ',' << r.exact_zero
          << ',' << r.violation << '\n';
    rep << "  i=" << i << " points=" << reps[k].rows.size() << " violations=" << reps[k].violations
        << " max|Phi|=" << fmt(reps[k].max_abs) << "\n";
    if (reps[k].violations != 0 || reps[k].max_abs > 1 + 1e-9) out.ok = false;
  }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

TaskOutput task_decay(const json& cfg) {
  const auto sp = parse_spec(cfg, "config.");
  const auto spec = build_spec(sp);
  if (spec.n0() + 1 > sp.n - 2) throw ConfigError("config.n: no index i with n0 < i < n-1");
  const auto [lo, hi] = get_i_range(cfg, spec.n0() + 1, sp.n - 2, spec.n0() + 1, sp.n - 2);
  const i64 samples = get_int(cfg, "samples", "config.", 200);
  if (samples > 1000000) throw ConfigError("config.samples: at most 1000000");
  const auto seed = seed_of(cfg);
  PhiEvaluator ev(spec);
  std::vector<DecayReport> reps(static_cast<std::size_t>(hi - lo + 1));
  parallel_for(reps.size(), threads_of(cfg), [&](std::size_t k) {
    const int i = lo + static_cast<int>(k);
    reps[k] = verifyDecay(ev, i, static_cast<int>(samples), seed + static_cast<std::uint64_t>(i));
  });
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,i,v_a,a_unit,v_m,m_unit,re,im,abs,ratio_normalized\n";
  rep << "decay " << spec_cols(sp) << " bound=" << fmt(bound_of(spec)) << "\n";
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const int i = lo + static_cast<int>(k);
    for (const auto& r : reps[k].rows)
      csv << spec_cols(sp) << ',' << i << ',' << point_cols(r.point) << ',' << fmt(r.value.real()) << ','
          << fmt(r.value.imag()) << ',' << fmt(std::abs(r.value)) << ',' << fmt(r.ratio) << '\n';
    rep << "  i=" << i << " points=" << reps[k].rows.size() << " max_ratio=" << fmt(reps[k].max_ratio) << "\n";
    if (reps[k].max_ratio > reps[k].bound * (1 + 1e-9)) out.ok = false;
  }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

TaskOutput task_decay_sweep(const json& cfg) {
  const json* sw = find(cfg, "sweep");
  if (!sw || !sw->is_array()) throw ConfigError("config.sweep: expected an array of {p, n, family}");
  std::vector<SpecParams> params;
  for (std::size_t k = 0; k < sw->size(); ++k) {
    if (!(*sw)[k].is_object()) throw ConfigError("config.sweep[" + std::to_string(k) + "]: expected an object");
    params.push_back(parse_spec((*sw)[k], "config.sweep[" + std::to_string(k) + "]."));
  }
  const i64 samples = get_int(cfg, "samples", "config.", 100);
  if (samples > 1000000) throw ConfigError("config.samples: at most 1000000");
  const auto seed = seed_of(cfg);
  struct Row {
    int i;
    std::size_t points;
    double max_ratio, bound;
  };
  std::vector<std::vector<Row>> rows(params.size());
  parallel_for(params.size(), threads_of(cfg), [&](std::size_t k) {
    const auto spec = build_spec(params[k]);
    PhiEvaluator ev(spec);
    for (int i = spec.n0() + 1; i < spec.n() - 1; ++i) {
      const auto r = verifyDecay(ev, i, static_cast<int>(samples), seed + static_cast<std::uint64_t>(i));
      rows[k].push_back({i, r.rows.size(), r.max_ratio, r.bound});
    }
  });
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,i,points,max_ratio_normalized,bound\n";
  rep << "decay-sweep over " << params.size() << " configurations\n";
  for (std::size_t k = 0; k < params.size(); ++k)
    for (const auto& r : rows[k]) {
      csv << spec_cols(params[k]) << ',' << r.i << ',' << r.points << ',' << fmt(r.max_ratio) << ',' << fmt(r.bound)
          << '\n';
      rep << "  " << spec_cols(params[k]) << " i=" << r.i << " max_ratio=" << fmt(r.max_ratio) << "\n";
      if (r.max_ratio > r.bound * (1 + 1e-9)) out.ok = false;
    }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

std::vector<GridPoint> supported_points(const ReprSpec& s, int i, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GridPoint> pts;
  const i64 mod = ipow(s.p(), s.n());
  while (static_cast<int>(pts.size()) < count) {
    const i64 a = static_cast<i64>(rng() % static_cast<std::uint64_t>(mod));
    const i64 m = static_cast<i64>(rng() % static_cast<std::uint64_t>(mod));
    if (a % s.p() == 0 || m % s.p() == 0) continue;
    pts.push_back({0, a, false, i - s.n(), m});
  }
  return pts;
}

TaskOutput task_speedup(const json& cfg) {
  const auto sp = parse_spec(cfg, "config.");
  const auto spec = build_spec(sp);
  if (spec.n0() + 1 > sp.n - 2) throw ConfigError("config.n: no index i with n0 < i < n-1");
  const auto [lo, hi] = get_i_range(cfg, spec.n0() + 1, sp.n - 2, spec.n0() + 1, sp.n - 2);
  const i64 points = get_int(cfg, "points", "config.", 40);
  if (points < 1 || points > 100000) throw ConfigError("config.points: must be in 1..100000");
  const bool literal = find(cfg, "literal") ? cfg["literal"].get<bool>() : true;
  const double min_speedup = get_double(cfg, "min_speedup", "config.", 0.0);
  const auto seed = seed_of(cfg);
  PhiEvaluator ev(spec);
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,i,v_a,a_unit,v_m,m_unit,naive_terms,fast_pairs,naive_seconds,literal_seconds,fast_seconds,deviation\n";
  rep << "speedup " << spec_cols(sp) << "\n";
  double tn = 0, tl = 0, tf = 0;
  for (int i = lo; i <= hi; ++i) {
    const auto r = speedupReport(ev, i, supported_points(spec, i, static_cast<int>(points), seed + static_cast<std::uint64_t>(i)),
                                 literal);
    for (const auto& row : r.rows)
      csv << spec_cols(sp) << ',' << i << ',' << point_cols(row.point) << ',' << row.naive_terms << ',' << row.fast_pairs
          << ',' << fmt(row.naive_seconds) << ',' << fmt(row.literal_seconds) << ',' << fmt(row.fast_seconds) << ','
          << fmt(row.deviation) << '\n';
    tn += r.naive_seconds;
    tl += r.literal_seconds;
    tf += r.fast_seconds;
    rep << "  i=" << i << " points=" << r.rows.size() << " max_pairs=" << r.max_pairs
        << " max_deviation=" << fmt(r.max_deviation) << " speedup(table)=" << fmt(r.speedup());
    if (literal) rep << " speedup(literal)=" << fmt(r.literal_speedup());
    rep << "\n";
    if (r.max_deviation > 1e-8 || r.zero_mismatches != 0 || static_cast<double>(r.max_pairs) > bound_of(spec))
      out.ok = false;
  }
  const double s_table = tf > 0 ? tn / tf : 0, s_lit = tf > 0 ? tl / tf : 0;
  rep << "  total speedup(table)=" << fmt(s_table);
  if (literal) rep << " speedup(literal)=" << fmt(s_lit);
  rep << "\n";
  if (min_speedup > 0 && (literal ? s_lit : s_table) < min_speedup) out.ok = false;
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

TaskOutput task_filtration(const json& cfg) {
  const auto sp = parse_spec(cfg, "config.");
  const auto spec = build_spec(sp);
  if (spec.n0() < 3) throw ConfigError("config.n: needs n0 >= 3 so that j ranges over 1..n0-2");
  const i64 samples = get_int(cfg, "samples", "config.", 100);
  if (samples < 1 || samples > 100000) throw ConfigError("config.samples: must be in 1..100000");
  const auto seed = seed_of(cfg);
  PhiEvaluator ev(spec);
  const double q = static_cast<double>(sp.p);
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,j,sample,i,abs,bound,violation\n";
  rep << "filtration " << spec_cols(sp) << "\n";
  for (int j = 1; j <= spec.n0() - 2; ++j) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(j));
    const double bound = bound_of(spec) * std::pow(q, (j - spec.n1()) / 2.0);
    double worst = 0;
    int bad = 0;
    for (i64 t = 0; t < samples; ++t) {
      const auto g = sampleKStar(spec, j, rng);
      const auto dec = decomposeKStar(g, spec);
      const double v = std::abs(ev.value(phiPrime(ev, g)));
      const bool viol = v > bound * (1 + 1e-9);
      bad += viol;
      worst = std::max(worst, v / bound);
      csv << spec_cols(sp) << ',' << j << ',' << t << ',' << dec.i << ',' << fmt(v) << ',' << fmt(bound) << ',' << viol
          << '\n';
    }
    rep << "  j=" << j << " samples=" << samples << " violations=" << bad << " max|Phi'|/bound=" << fmt(worst) << "\n";
    if (bad) out.ok = false;
  }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

TaskOutput task_gram(const json& cfg) {
  const auto sp = parse_spec(cfg, "config.");
  const auto spec = build_spec(sp);
  const i64 samples = get_int(cfg, "samples", "config.", 60);
  if (samples < 1 || samples > 2000) throw ConfigError("config.samples: must be in 1..2000");
  const double tol = get_double(cfg, "tolerance", "config.", 1e-8);
  const auto seed = seed_of(cfg);
  PhiEvaluator ev(spec);
  const double limit = 4 * std::pow(static_cast<double>(sp.p), spec.n0());
  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p,n,family,samples,rank,min_eigenvalue,hermitian_defect,rank_bound\n";
  rep << "gram " << spec_cols(sp) << "\n";
  std::vector<int> ranks;
  for (i64 s : {samples, 2 * samples}) {
    const auto g = gramDimensionEstimate(ev, static_cast<int>(s), tol, seed);
    ranks.push_back(g.rank);
    csv << spec_cols(sp) << ',' << s << ',' << g.rank << ',' << fmt(g.min_eigenvalue) << ',' << fmt(g.hermitian_defect)
        << ',' << fmt(limit) << '\n';
    rep << "  samples=" << s << " rank=" << g.rank << " min_eigenvalue=" << fmt(g.min_eigenvalue)
        << " hermitian_defect=" << fmt(g.hermitian_defect) << "\n";
    if (g.rank > limit || g.hermitian_defect > 1e-6 || g.min_eigenvalue < -1e-6) out.ok = false;
  }
  if (ranks[0] != ranks[1]) {
    rep << "  rank did not stabilize under doubling\n";
    out.ok = false;
  }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

Quat parse_quat(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) throw ConfigError(where + ": expected four coordinates");
  Quat q;
  for (std::size_t t = 0; t < 4; ++t) q[t] = parse_rational(v[t], where + "[" + std::to_string(t) + "]");
  return q;
}

TaskOutput task_counting(const json& cfg) {
  const json* alg = find(cfg, "algebra");
  if (!alg || !alg->is_object()) throw ConfigError("config.algebra: expected {a, b}");
  const i64 a = get_int(*alg, "a", "config.algebra."), b = get_int(*alg, "b", "config.algebra.");
  if (a <= 0 || b == 0) throw ConfigError("config.algebra: need a > 0 and b != 0");
  const QuaternionAlgebra A(a, b);
  const json* ord = find(cfg, "order");
  if (!ord || !ord->is_array() || ord->size() != 4) throw ConfigError("config.order: expected four basis vectors");
  RationalOrder O;
  for (std::size_t r = 0; r < 4; ++r) O.basis[r] = parse_quat((*ord)[r], "config.order[" + std::to_string(r) + "]");
  bool maximal = false;
  try {
    maximal = verifyMaximalOrder(A, O);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.order: ") + e.what());
  }
  const json* zj = find(cfg, "z");
  if (!zj || !zj->is_array() || zj->size() != 2 || !(*zj)[0].is_number() || !(*zj)[1].is_number())
    throw ConfigError("config.z: expected [x, y]");
  const UpperHalfPoint z{(*zj)[0].get<double>(), (*zj)[1].get<double>()};
  if (z.y <= 0) throw ConfigError("config.z: y must be positive");
  const double delta = get_double(cfg, "delta", "config.", 1.0);
  if (delta < 0) throw ConfigError("config.delta: must be nonnegative");
  const i64 L = get_int(cfg, "L", "config.", 20);
  const i64 budget = get_int(cfg, "L_budget", "config.", 40);
  if (L < 1 || L > budget) throw ConfigError("config.L: must be in 1..L_budget (" + std::to_string(budget) + ")");
  const double window = get_double(cfg, "ratio_window", "config.", 64.0);
  const json* lats = find(cfg, "lattices");
  if (!lats || !lats->is_array()) throw ConfigError("config.lattices: expected an array");

  struct Lat {
    std::string label;
    TidyLattice lat;
  };
  std::vector<Lat> lattices;
  for (std::size_t k = 0; k < lats->size(); ++k) {
    const auto& e = (*lats)[k];
    const std::string where = "config.lattices[" + std::to_string(k) + "]";
    try {
      if (find(e, "plan")) {
        std::map<i64, int> plan;
        std::string label;
        for (const auto& [key, val] : e["plan"].items()) {
          if (!val.is_number_integer()) throw ConfigError(where + ".plan." + key + ": expected an integer");
          plan[std::stoll(key)] = val.get<int>();
        }
        for (const auto& [p, r] : plan) label += (label.empty() ? "" : "*") + std::to_string(p) + "^" + std::to_string(r);
        lattices.push_back({label.empty() ? "1" : label, buildTidyLattice(A, O, plan)});
      } else if (find(e, "conductor")) {
        const auto& c = e["conductor"];
        const i64 M = get_int(c, "M", where + ".conductor.");
        const Quat s = find(c, "s") ? parse_quat(c["s"], where + ".conductor.s") : Quat{0, Rational(1), 0, 0};
        lattices.push_back({"cond" + std::to_string(M), conductorLattice(A, O, s, M)});
      } else {
        throw ConfigError(where + ": expected a \"plan\" or \"conductor\" entry");
      }
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(where + ": " + ex.what());
    }
  }

  std::vector<i64> norms;
  for (i64 m = 1; m <= L; ++m) {
    norms.push_back(m);
    norms.push_back(m * m);
  }
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  std::vector<CountTable> fp(lattices.size()), box(lattices.size());
  parallel_for(lattices.size(), threads_of(cfg), [&](std::size_t k) {
    fp[k] = countLatticePointsTable(A, lattices[k].lat, z, delta, norms, Enumerator::FinckePohst);
    box[k] = countLatticePointsTable(A, lattices[k].lat, z, delta, norms, Enumerator::Box);
  });

  TaskOutput out;
  std::ostringstream csv, rep;
  csv << "p_plan,N,L,m,count,ratio_bd1,ratio_bd2\n";
  rep << "counting on (" << a << ", " << b << "), d = " << A.discriminant() << ", maximal order "
      << (maximal ? "verified" : "NOT verified") << "\n";
  if (!maximal) out.ok = false;
  double lo = 1e300, hi = 0;
  for (std::size_t k = 0; k < lattices.size(); ++k) {
    const auto& lat = lattices[k].lat;
    const auto& t = fp[k].by_norm;
    i64 s1 = 0, s2 = 0;
    for (i64 m = 1; m <= L; ++m) {
      s1 += t.at(m);
      s2 += t.at(m * m);
    }
    const double Ld = static_cast<double>(L), Nd = static_cast<double>(lat.N);
    const double r1 = static_cast<double>(s1) / (Ld + Ld * Ld / Nd), r2 = static_cast<double>(s2) / (Ld + Ld * Ld * Ld / Nd);
    lo = std::min({lo, r1, r2});
    hi = std::max({hi, r1, r2});
    for (i64 m = 1; m <= L; ++m)
      csv << lattices[k].label << ',' << lat.N << ',' << L << ',' << m << ',' << t.at(m) << ',' << fmt(r1) << ','
          << fmt(r2) << '\n';
    const bool agree = fp[k].by_norm == box[k].by_norm;
    bool even = true;
    for (const auto& [m, c] : t) even = even && c % 2 == 0;
    const bool unit = t.at(1) >= 2;
    bool mono = true;
    if (k > 0 && lattice_contains(lattices[k - 1].lat, lat))
      for (const auto& [m, c] : t) mono = mono && c <= fp[k - 1].by_norm.at(m);
    rep << "  " << lattices[k].label << " N=" << lat.N << " shape=(" << lat.shape[0] << "," << lat.shape[1] << ","
        << lat.shape[2] << ") sum_linear=" << s1 << " sum_square=" << s2 << " ratio_bd1=" << fmt(r1)
        << " ratio_bd2=" << fmt(r2) << " enumerators_agree=" << agree << " even=" << even << " count1>=2=" << unit
        << " monotone=" << mono << "\n";
    if (!agree || !even || !unit || !mono) out.ok = false;
  }
  if (!lattices.empty()) {
    rep << "  ratio window max/min=" << fmt(hi / lo) << " (limit " << fmt(window) << ")\n";
    if (!(hi / lo <= window)) out.ok = false;
  }
  rep << (out.ok ? "PASS" : "FAIL") << "\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

TaskOutput task_exponent(const json& cfg) {
  const Rational eta1 = get_rational(cfg, "eta1", "config.");
  const Rational delta = get_rational(cfg, "delta", "config.");
  const Rational eta2 = get_rational(cfg, "eta2", "config.");
  if (eta1 < Rational(0) || eta2 < eta1) throw ConfigError("config.eta1: need 0 <= eta1 <= eta2");
  TaskOutput out;
  std::ostringstream csv, rep;
  const auto e = supnormExponent(eta1, delta, eta2), d = depthExponent(eta1, delta, eta2);
  csv << "quantity,value\n";
  csv << "supnorm_exponent," << to_string(e) << "\n";
  csv << "depth_exponent," << to_string(d) << "\n";
  rep << "C₁-exponent = " << to_string(e) << ", depth exponent = " << to_string(d) << "\n";
  if (const json* a1 = find(cfg, "a1")) {
    if (!a1->is_object()) throw ConfigError("config.a1: expected {prime: a1}");
    std::map<i64, int> plan;
    for (const auto& [key, val] : a1->items()) {
      if (!val.is_number_integer() || val.get<int>() < 1) throw ConfigError("config.a1." + key + ": expected an integer >= 1");
      plan[std::stoll(key)] = val.get<int>();
    }
    const auto s = filtrationSchedule(plan, eta1, eta2);
    csv << "amplifier_exponent," << to_string(s.amplifier) << "\n";
    for (const auto& [p, v] : s.eta) {
      rep << "eta[" << p << "] = [";
      for (std::size_t t = 0; t < v.size(); ++t) {
        rep << (t ? ", " : "") << to_string(v[t]);
        csv << "eta_" << p << "_" << t + 1 << "," << to_string(v[t]) << "\n";
      }
      rep << "]\n";
    }
    rep << "amplifier exponent = " << to_string(s.amplifier) << ", |R| = " << s.product_size() << "\n";
  }
  rep << "PASS\n";
  out.csv = csv.str();
  out.report = rep.str();
  return out;
}

}  // namespace

TaskOutput runTaskInMemory(const json& cfg) {
  if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
  const auto task = get_string(cfg, "task", "config.");
  try {
    if (task == "verify-support") return task_verify_support(cfg);
    if (task == "decay") return task_decay(cfg);
    if (task == "decay-sweep") return task_decay_sweep(cfg);
    if (task == "speedup") return task_speedup(cfg);
    if (task == "filtration") return task_filtration(cfg);
    if (task == "gram") return task_gram(cfg);
    if (task == "counting") return task_counting(cfg);
    if (task == "exponent") return task_exponent(cfg);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  throw ConfigError("config.task: unknown task \"" + task +
                    "\" (verify-support, decay, decay-sweep, speedup, filtration, gram, counting, exponent)");
}

int runTask(const json& cfg, const std::filesystem::path& out) {
  TaskOutput r;
  try {
    r = runTaskInMemory(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::filesystem::create_directories(out);
  const auto task = cfg["task"].get<std::string>();
  std::ofstream(out / (task + ".csv")) << r.csv;
  std::ofstream(out / "report.txt") << r.report;
  std::cout << r.report;
  return r.ok ? 0 : 1;
}

}  // namespace newmc::runner
