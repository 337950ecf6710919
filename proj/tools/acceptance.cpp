// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "newmc/exponents.hpp"
#include "newmc/quaternion.hpp"
#include "newmc/statphase.hpp"

using namespace newmc;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Case {
  i64 p;
  int n;
  Family f;
  std::string tag() const {
    return std::to_string(p) + "/" + std::to_string(n) + "/" + family_name(f);
  }
};

std::vector<Case> local_cases() {
  std::vector<Case> out;
  for (i64 p : {3, 5}) {
    out.push_back({p, 6, Family::PrincipalSeries});
    out.push_back({p, 8, Family::PrincipalSeries});
    out.push_back({p, 6, Family::SupercuspidalUnramified});
    out.push_back({p, 5, Family::SupercuspidalRamified});
    out.push_back({p, 7, Family::SupercuspidalRamified});
  }
  return out;
}

// maxima of |Phi| q^{(n-i)/2} over the decay samples, frozen after the first verified run
const std::map<std::string, double> kFrozenDecay = {
    {"3/6/ps", 2.8190778623577266},
    {"3/8/ps", 2.9949244748138057},
    {"3/6/sc-unramified", 2.8190778623577226},
    {"3/5/sc-ramified", 2.8190778623577288},
    {"3/7/sc-ramified", 2.9949244748138115},
    {"5/6/ps", 2.480286753286193},
    {"5/8/ps", 2.4992104732082687},
    {"5/6/sc-unramified", 2.4802867532861312},
    {"5/5/sc-ramified", 2.4802867532862036},
    {"5/7/sc-ramified", 2.499210473208263},
};

constexpr int kGridPoints = 200;
constexpr int kDecaySamples = 200;
constexpr double kTolAbs = 1e-9;
constexpr double kTolRel = 1e-8;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

void report(int id, const Outcome& o) {
  std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
  std::fflush(stdout);
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

std::vector<MultChar> primitive_chars(i64 p, int a) {
  std::vector<MultChar> out;
  for (i64 c = 0; c < phi_prime_power(p, a); ++c) {
    MultChar chi(p, a, c);
    if (chi.conductor() == a) out.push_back(chi);
  }
  return out;
}

QuadExtElement shell_element(const ThetaChar& th, const ExtResidue& w, const ContextPtr& ctx) {
  const int k = th.level();
  auto lift = [&](i64 x, int s) { return PAdicScalar::from_integer(ctx, x).shift(s); };
  if (th.ext().kind() == ExtKind::Unramified) return {lift(w.a, -k), lift(w.b, -k)};
  const int j = k / 2;
  return {lift(w.b, -j), lift(w.a, -j - 1)};
}

}  // namespace

int main() {
  const auto t_all = Clock::now();
  bool all = true;
  std::printf("acceptance run: grids of >= %d points per i, %d decay samples per i\n", kGridPoints, kDecaySamples);

  // ---- criteria 1, 2, 3, 6, 9 share the evaluators ----
  Outcome c1, c2, c3, c6, c9;
  i64 c1_points = 0, c1_viol = 0, c2_points = 0, c2_viol = 0, c6_queries = 0, c6_bad = 0;
  double c9_max_abs = 0, c6_max_dev = 0;
  i64 c9_float_checked = 0;
  i64 c6_max_pairs_ps = 0, c6_max_pairs_sc = 0;
  const auto t1 = Clock::now();
  double t_support = 0;
  std::ostringstream decay_summary, freeze_lines;
  bool decay_frozen_ok = true;
  for (const auto& c : local_cases()) {
    const auto spec = makeSpec(c.p, c.n, c.f);
    PhiEvaluator ev(spec);
    const double bound = spec.is_ps() ? 2.0 * c.p * c.p : 1.0 * c.p * c.p * c.p;
    double case_max = 0;
    for (int i = spec.n0() + 1; i <= c.n; ++i) {
      const auto ts = Clock::now();
      const auto grid = support_grid(spec, i, kGridPoints, 1000 + static_cast<std::uint64_t>(i));
      const auto rep = verifySupport(ev, i, grid);
      t_support += since(ts);
      c9_max_abs = std::max(c9_max_abs, rep.max_abs);
      if (i < c.n - 1) {
        c1_points += static_cast<i64>(rep.rows.size());
        c1_viol += rep.violations;
        if (rep.rows.size() < static_cast<std::size_t>(kGridPoints)) c1.pass = false;
      } else {
        c2_points += static_cast<i64>(rep.rows.size());
        c2_viol += rep.violations;
        if (rep.rows.size() < static_cast<std::size_t>(kGridPoints)) c2.pass = false;
      }
      if (i >= c.n - 1) continue;

      // criterion 3
      const auto dec = verifyDecay(ev, i, kDecaySamples, 2000 + static_cast<std::uint64_t>(i));
      case_max = std::max(case_max, dec.max_ratio);
      for (const auto& r : dec.rows) c9_max_abs = std::max(c9_max_abs, std::abs(r.value));

      // criterion 6: every supported point of the grid plus random supported points
      std::vector<GridPoint> pts;
      for (const auto& r : rep.rows)
        if (!r.expected_zero) pts.push_back(r.point);
      const auto extra = supported_points(spec, i, 40, 3000 + static_cast<std::uint64_t>(i));
      pts.insert(pts.end(), extra.begin(), extra.end());
      for (const auto& g : pts) {
        const auto q = make_query(spec, i, g);
        const auto fast = phiFast(ev, q);
        const auto slow = ev.naive(q);
        ++c6_queries;
        const bool slow_zero = slow.structural_zero || ev.exact(slow).is_zero();
        const bool fast_zero = fast.sum.structural_zero || ev.exact(fast.sum).is_zero();
        bool ok = slow_zero == fast_zero;
        if (ok && !slow_zero) {
          const auto vs = ev.value(slow), vf = ev.value(fast.sum);
          const double dev = std::abs(vs - vf) / std::abs(vs);
          c6_max_dev = std::max(c6_max_dev, dev);
          ok = dev <= kTolRel;
        }
        auto& mp = spec.is_ps() ? c6_max_pairs_ps : c6_max_pairs_sc;
        mp = std::max(mp, static_cast<i64>(fast.pairs.size()));
        if (static_cast<double>(fast.pairs.size()) > bound) ok = false;
        if (!ok) ++c6_bad;
      }
    }
    if (case_max > bound * (1 + kTolAbs)) c3.pass = false;
    decay_summary << " " << c.tag() << ":" << case_max;
    char buf[128];
    std::snprintf(buf, sizeof buf, "  {\"%s\", %.17g},\n", c.tag().c_str(), case_max);
    freeze_lines << buf;
    const auto it = kFrozenDecay.find(c.tag());
    if (it == kFrozenDecay.end() || std::abs(it->second - case_max) > kTolAbs * std::max(1.0, it->second))
      decay_frozen_ok = false;

    // criterion 9 at i = n
    const auto& ctx = spec.context();
    auto phi_n = [&](const PAdicScalar& m) { return phiNaive(ev, {c.n, PAdicScalar::from_integer(ctx, 1), m}); };
    const auto one = phi_n(PAdicScalar::zero(ctx));
    if (!exact_equal(one, {CycloValue::integer(1, 1), CycloValue::integer(1, 1)})) c9.pass = false;
    for (i64 mu = 1; mu < c.p; ++mu) {
      const auto v1 = phi_n(PAdicScalar::make(ctx, -1, mu));
      if (!exact_equal(v1, {CycloValue::integer(1, -1), CycloValue::integer(1, c.p - 1)})) c9.pass = false;
      for (int vm = -2; vm >= -4; --vm) {
        const MatCoefQuery q{c.n, PAdicScalar::from_integer(ctx, 1), PAdicScalar::make(ctx, vm, mu)};
        try {
          if (!phiNaive(ev, q).is_zero()) c9.pass = false;
        } catch (const std::length_error&) {
          // modulus beyond the exact budget: decide on the float value
          ++c9_float_checked;
          if (std::abs(ev.value(ev.naive(q))) > 1e-12) c9.pass = false;
        }
      }
    }
  }
  const double t_local = since(t1);

  c1.pass = c1.pass && c1_viol == 0 && t_support <= 600;
  c1.detail << "points=" << c1_points << " violations=" << c1_viol << " support-time=" << t_support << "s (budget 600s)";
  report(1, c1);
  c2.pass = c2.pass && c2_viol == 0;
  c2.detail << "points=" << c2_points << " violations=" << c2_viol;
  report(2, c2);
  c3.pass = c3.pass && decay_frozen_ok;
  c3.detail << "max |Phi| q^{(n-i)/2} per case:" << decay_summary.str()
            << (decay_frozen_ok ? " (matches frozen values)" : " (frozen values missing or changed)");
  report(3, c3);
  if (!decay_frozen_ok) std::printf("  current maxima:\n%s", freeze_lines.str().c_str());
  all = all && c1.pass && c2.pass && c3.pass;

  // ---- criterion 4 ----
  {
    Outcome o;
    i64 total = 0, bad = 0;
    double worst = 0;
    for (int n : {6, 8}) {
      const auto spec = makeSpec(3, n, Family::PrincipalSeries);
      PhiEvaluator ev(spec);
      const double q = 3.0;
      for (int j = 1; j <= spec.n0() - 2; ++j) {
        std::mt19937_64 rng(4000 + static_cast<std::uint64_t>(10 * n + j));
        const double b = 2 * q * q * std::pow(q, (j - spec.n1()) / 2.0);
        for (int t = 0; t < 100; ++t) {
          const auto g = sampleKStar(spec, j, rng);
          if (g.level() != j) ++bad;
          const double v = std::abs(ev.value(phiPrime(ev, g)));
          worst = std::max(worst, v / b);
          if (v > b * (1 + kTolAbs)) ++bad;
          ++total;
        }
      }
    }
    o.pass = bad == 0 && total == 300;
    o.detail << "samples=" << total << " exceptions=" << bad << " max |Phi'|/bound=" << worst;
    report(4, o);
    all = all && o.pass;
  }

  // ---- criterion 5 ----
  {
    Outcome o;
    for (auto [n, s] : {std::pair{4, 40}, std::pair{6, 80}}) {
      const auto spec = makeSpec(3, n, Family::PrincipalSeries);
      PhiEvaluator ev(spec);
      const auto g1 = gramDimensionEstimate(ev, s, 1e-8, 5000 + static_cast<std::uint64_t>(n));
      const auto g2 = gramDimensionEstimate(ev, 2 * s, 1e-8, 5000 + static_cast<std::uint64_t>(n));
      const double limit = 4 * std::pow(3.0, spec.n0());
      const bool ok = g1.rank == g2.rank && g2.rank <= limit && g1.hermitian_defect <= 1e-6 &&
                      g2.hermitian_defect <= 1e-6 && g1.min_eigenvalue >= -1e-6 && g2.min_eigenvalue >= -1e-6;
      o.pass = o.pass && ok;
      o.detail << "n=" << n << ": rank " << g1.rank << "@" << s << " -> " << g2.rank << "@" << 2 * s << " (<= " << limit
               << "), defect " << std::max(g1.hermitian_defect, g2.hermitian_defect) << ", min eig "
               << std::min(g1.min_eigenvalue, g2.min_eigenvalue) << "; ";
    }
    report(5, o);
    all = all && o.pass;
  }

  // ---- criterion 6 ----
  {
    double sp38 = 0, sp38_table = 0, sp56 = 0, sp56_table = 0;
    for (auto [p, n] : {std::pair<i64, int>{3, 8}, std::pair<i64, int>{5, 6}}) {
      const auto spec = makeSpec(p, n, Family::PrincipalSeries);
      PhiEvaluator ev(spec);
      double tn = 0, tl = 0, tf = 0;
      for (int i = spec.n0() + 1; i < n - 1; ++i) {
        const auto r = speedupReport(ev, i, supported_points(spec, i, 40, 6000 + static_cast<std::uint64_t>(i)));
        tn += r.naive_seconds;
        tl += r.literal_seconds;
        tf += r.fast_seconds;
        if (r.max_deviation > kTolRel || r.zero_mismatches != 0) c6.pass = false;
      }
      (p == 3 ? sp38 : sp56) = tl / tf;
      (p == 3 ? sp38_table : sp56_table) = tn / tf;
    }
    c6.pass = c6.pass && c6_bad == 0 && sp38 >= 10 && sp56 >= 50;
    c6.detail << "queries=" << c6_queries << " mismatches=" << c6_bad << " max rel dev=" << c6_max_dev
              << " max pairs ps/sc=" << c6_max_pairs_ps << "/" << c6_max_pairs_sc << "; speedup vs literal naive: (3,8) "
              << sp38 << "x (>= 10), (5,6) " << sp56 << "x (>= 50); vs tabulated naive: " << sp38_table << "x, "
              << sp56_table << "x";
    report(6, c6);
    all = all && c6.pass;
  }

  // ---- criterion 7 ----
  {
    Outcome o;
    i64 chars = 0, shells = 0;
    for (i64 p : {3, 5})
      for (int n0 = 2; n0 <= 4; ++n0) {
        if (ipow(p, n0) > 200) continue;
        for (const auto& mu : primitive_chars(p, n0)) {
          const double a = std::abs(gaussC0PrincipalSeries(mu).embed());
          if (std::abs(a - std::pow(static_cast<double>(p), -n0 / 2.0)) > 1e-12) o.pass = false;
          ++chars;
        }
      }
    struct TC {
      i64 p;
      ExtKind kind;
      int level;
    };
    double lo = 1e300, hi = 0;
    for (const auto& tc : {TC{3, ExtKind::Unramified, 2}, TC{3, ExtKind::Unramified, 3}, TC{5, ExtKind::Unramified, 2},
                           TC{5, ExtKind::Unramified, 3}, TC{3, ExtKind::Ramified, 2}, TC{3, ExtKind::Ramified, 4},
                           TC{5, ExtKind::Ramified, 2}, TC{5, ExtKind::Ramified, 4}}) {
      auto ctx = make_context(tc.p, tc.level + 6);
      QuadExtContext E(ctx, tc.kind);
      const auto th = buildTheta(E, tc.level);
      const int n = tc.kind == ExtKind::Unramified ? 2 * tc.level : tc.level + 1;
      const double q = static_cast<double>(tc.p);
      const double scaled = std::abs(gaussC0Supercuspidal(th).embed()) * std::pow(q, n / 2.0);
      lo = std::min(lo, scaled / std::pow(q, -0.5));
      hi = std::max(hi, scaled / std::pow(q, 0.5));
      if (scaled < std::pow(q, -0.5) - 1e-12 || scaled > std::pow(q, 0.5) + 1e-12) o.pass = false;
      for (const auto& w : unitShellReps(E, tc.level)) {
        if (extNorm(E, shell_element(th, w, ctx)).valuation() != -n) o.pass = false;
        ++shells;
      }
    }
    o.detail << "primitive mu=" << chars << " shell elements=" << shells << " sc |C0| q^{n/2} within [q^-1/2, q^1/2]";
    report(7, o);
    all = all && o.pass;
  }

  // ---- criterion 8 ----
  {
    Outcome o;
    i64 checked = 0, bad = 0;
    for (i64 p : {3, 5, 7}) {
      AdditiveChar ps(p);
      for (int a = 2; a <= 4; ++a) {
        if (ipow(p, a) > 3000) continue;
        auto ctx = make_context(p, a + 4);
        const int lo = ceil_div(a, 2);
        for (const auto& chi : primitive_chars(p, a)) {
          const auto alpha = alphaOfChi(chi, ctx);
          for (i64 t = 0; t < ipow(p, a - lo); ++t) {
            const i64 dx = t * ipow(p, lo);
            if (std::abs(chi.value(1 + dx) - ps.value(alpha * PAdicScalar::from_integer(ctx, dx))) > 1e-9) ++bad;
            ++checked;
          }
        }
      }
    }
    struct TC {
      i64 p;
      ExtKind kind;
      int level;
    };
    for (const auto& tc : {TC{3, ExtKind::Unramified, 2}, TC{3, ExtKind::Unramified, 3}, TC{3, ExtKind::Unramified, 4},
                           TC{5, ExtKind::Unramified, 2}, TC{5, ExtKind::Unramified, 3}, TC{3, ExtKind::Ramified, 2},
                           TC{3, ExtKind::Ramified, 4}, TC{5, ExtKind::Ramified, 2}, TC{5, ExtKind::Ramified, 4}}) {
      auto ctx = make_context(tc.p, tc.level + 6);
      QuadExtContext E(ctx, tc.kind);
      AdditiveChar psi(tc.p);
      const auto th = buildTheta(E, tc.level);
      const auto alpha = alphaOfTheta(th, ctx);
      const int lo = ceil_div(tc.level, 2);
      const i64 sa = ipow(tc.p, E.a_exp(lo)), sb = ipow(tc.p, E.b_exp(lo));
      const auto& R = th.ring();
      for (i64 da = 0; da < R.mod_a(); da += sa)
        for (i64 db = 0; db < R.mod_b(); db += sb) {
          const QuadExtElement du{PAdicScalar::from_integer(ctx, da), PAdicScalar::from_integer(ctx, db)};
          if (std::abs(th.value(0, R.reduce(1 + da, db)) - psi.value_E(ext_mul(E, alpha, du))) > 1e-9) ++bad;
          ++checked;
        }
    }
    o.pass = bad == 0;
    o.detail << "ball points checked=" << checked << " exceptions=" << bad;
    report(8, o);
    all = all && o.pass;
  }

  // ---- criterion 9 ----
  c9.pass = c9.pass && c9_max_abs <= 1 + kTolAbs;
  c9.detail << "Phi(1,0)=1, Phi(1,m)=-1/(q-1) at v(m)=-1, 0 below, exactly; max |Phi| over all evaluated points="
            << c9_max_abs << " (" << c9_float_checked << " zero checks in floating point)";
  report(9, c9);
  all = all && c9.pass;

  // ---- criterion 10 ----
  {
    Outcome o;
    const Rational z(0), one(1), half(1, 2);
    const auto sched = filtrationSchedule({{3, 4}}, z, half);
    o.pass = supnormExponent(z, one, half) == Rational(5, 12) && depthExponent(z, one, half) == Rational(5, 24) &&
             depthExponent(z, one, z) == Rational(1, 4) &&
             sched.eta.at(3) == std::vector<Rational>{z, Rational(1, 8), Rational(1, 4), Rational(3, 8), half};
    o.detail << "supnorm(0,1,1/2)=" << to_string(supnormExponent(z, one, half))
             << " depth(0,1,1/2)=" << to_string(depthExponent(z, one, half))
             << " depth(0,1,0)=" << to_string(depthExponent(z, one, z)) << " schedule(4,0,1/2)=[";
    for (std::size_t t = 0; t < sched.eta.at(3).size(); ++t) o.detail << (t ? "," : "") << to_string(sched.eta.at(3)[t]);
    o.detail << "]";
    report(10, o);
    all = all && o.pass;
  }

  // ---- criterion 11 ----
  {
    Outcome o;
    const auto t11 = Clock::now();
    const QuaternionAlgebra A(3, -1);
    const Rational h(1, 2);
    const RationalOrder O{{Quat{Rational(1), 0, 0, 0}, Quat{0, Rational(1), 0, 0}, Quat{0, 0, Rational(1), 0}, Quat{h, h, h, h}}};
    const bool maximal = A.discriminant() == 6 && verifyMaximalOrder(A, O);
    const UpperHalfPoint z{0.1, 1.2};
    const i64 L = 20;
    std::vector<i64> norms;
    for (i64 m = 1; m <= L; ++m) {
      norms.push_back(m);
      norms.push_back(m * m);
    }
    std::sort(norms.begin(), norms.end());
    norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
    bool agree = true, even = true, unit = true, mono = true;
    double lo = 1e300, hi = 0;
    std::map<i64, i64> prev;
    TidyLattice prev_lat;
    for (i64 M : {1, 3, 9}) {
      const auto lat = conductorLattice(A, O, {0, Rational(1), 0, 0}, M);
      if (lat.N != M * M) o.pass = false;
      const auto fp = countLatticePointsTable(A, lat, z, 1.0, norms, Enumerator::FinckePohst);
      const auto box = countLatticePointsTable(A, lat, z, 1.0, norms, Enumerator::Box);
      agree = agree && fp.by_norm == box.by_norm;
      for (const auto& [m, c] : fp.by_norm) even = even && c % 2 == 0;
      unit = unit && fp.by_norm.at(1) >= 2;
      if (!prev.empty()) {
        mono = mono && lattice_contains(prev_lat, lat);
        for (const auto& [m, c] : fp.by_norm) mono = mono && c <= prev.at(m);
      }
      prev = fp.by_norm;
      prev_lat = lat;
      const auto row = countingBoundRow(A, lat, z, 1.0, L);
      lo = std::min({lo, row.ratio_linear, row.ratio_square});
      hi = std::max({hi, row.ratio_linear, row.ratio_square});
      o.detail << "N=" << lat.N << " S1=" << row.sum_linear << " S2=" << row.sum_square << "; ";
    }
    const double secs = since(t11);
    o.pass = o.pass && maximal && agree && even && unit && mono && hi / lo <= 64 && secs <= 120;
    o.detail << "maximal=" << maximal << " enumerators agree=" << agree << " even=" << even << " count(1)>=2=" << unit
             << " monotone=" << mono << " ratio window=" << hi / lo << " (<= 64) time=" << secs << "s";
    report(11, o);
    all = all && o.pass;
  }

  std::printf("local-law section %.1fs, total %.1fs: %s\n", t_local, since(t_all), all ? "ALL PASS" : "SOME FAILED");
  return all ? 0 : 1;
}
