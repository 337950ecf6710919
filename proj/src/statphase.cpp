#include "newmc/statphase.hpp"

#include <algorithm>
#include <stdexcept>

namespace newmc {

std::vector<i64> sqrt_mod_prime_power(i64 d, i64 p, int e) {
  if (p == 2) throw std::invalid_argument("sqrt_mod_prime_power: p = 2 not supported");
  if (e < 0) throw std::invalid_argument("sqrt_mod_prime_power: negative exponent");
  const i64 pe = ipow(p, e);
  d = floor_mod(d, pe);
  std::vector<i64> out;
  if (e == 0) return {0};
  if (d == 0) {
    const i64 step = ipow(p, (e + 1) / 2);
    for (i64 z = 0; z < pe; z += step) out.push_back(z);
    return out;
  }
  const int v = int_valuation(d, p);
  if (v % 2 != 0) return out;
  const int e2 = e - v;
  const i64 pe2 = ipow(p, e2);
  const i64 du = floor_mod(d / ipow(p, v), pe2);
  if (legendre(du % p, p) != 1) return out;
  // Newton iteration z <- z - (z^2 - du) / (2 z), quadratic convergence
  i64 z = sqrt_mod_prime(du, p);
  for (int prec = 1; prec < e2; prec *= 2) {
    const i64 f = floor_mod(mulmod(z, z, pe2) - du, pe2);
    z = floor_mod(z - mulmod(f, invmod(floor_mod(2 * z, pe2), pe2), pe2), pe2);
  }
  const i64 scale = ipow(p, v / 2);
  const i64 period = ipow(p, e - v / 2);  // z' fixed mod p^{e2} => z fixed mod p^{e - v/2}
  for (i64 r : {z, floor_mod(-z, pe2)}) {
    const i64 base = floor_mod(mulmod(r, scale, pe), pe);
    for (i64 t = base % period; t < pe; t += period) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<i64> solveQuadraticCongruence(i64 A, i64 B, i64 C, i64 p, int e) {
  if (p == 2) throw std::invalid_argument("solveQuadraticCongruence: p = 2 not supported");
  if (e < 0) throw std::invalid_argument("solveQuadraticCongruence: negative exponent");
  if (e == 0) return {0};
  const i64 pe = ipow(p, e);
  A = floor_mod(A, pe);
  B = floor_mod(B, pe);
  C = floor_mod(C, pe);
  std::vector<i64> out;
  if (A % p != 0) {
    // (2Au + B)^2 = B^2 - 4AC, and z -> (z - B) / 2A is a bijection mod p^e
    const i64 disc = floor_mod(mulmod(B, B, pe) - mulmod(4 % pe, mulmod(A, C, pe), pe), pe);
    const i64 inv2a = invmod(floor_mod(2 * A, pe), pe);
    for (i64 z : sqrt_mod_prime_power(disc, p, e)) out.push_back(mulmod(floor_mod(z - B, pe), inv2a, pe));
  } else {
    // digit-by-digit lifting
    std::vector<i64> cur{0};
    i64 pt = 1;
    for (int t = 0; t < e; ++t) {
      std::vector<i64> next;
      const i64 pt1 = pt * p;
      for (i64 r : cur)
        for (i64 d = 0; d < p; ++d) {
          const i64 u = r + d * pt;
          const i64 f = floor_mod(mulmod(A, mulmod(u, u, pt1), pt1) + mulmod(B, u, pt1) + C, pt1);
          if (f == 0) next.push_back(u);
        }
      cur.swap(next);
      pt = pt1;
    }
    out = cur;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<i64> solveQuadraticCongruence(const PAdicScalar& A, const PAdicScalar& B, const PAdicScalar& C, int e) {
  const PAdicScalar* xs[] = {&A, &B, &C};
  i64 p = 0;
  i64 r[3];
  for (int t = 0; t < 3; ++t) {
    const auto& x = *xs[t];
    if (!x.context()) throw std::invalid_argument("solveQuadraticCongruence: unbound coefficient");
    if (p == 0) p = x.context()->p();
    if (x.context()->p() != p) throw std::invalid_argument("solveQuadraticCongruence: prime mismatch");
    if (!x.is_zero() && x.valuation() < 0) throw std::invalid_argument("solveQuadraticCongruence: non-integral coefficient");
    if (x.context()->K() < e) throw std::domain_error("solveQuadraticCongruence: insufficient precision");
    r[t] = x.is_zero() ? 0 : x.residue_mod(e);
  }
  return solveQuadraticCongruence(r[0], r[1], r[2], p, e);
}

namespace {

struct Prepared {
  int s = 0;
  i64 au = 0;   // unit part of a
  i64 mu_ = 0;  // m = p^{-s} mu_
  i64 M = 1;
  bool zero = false;
};

Prepared prepare(const PhiEvaluator& ev, const MatCoefQuery& q, FastResult& out) {
  const auto& spec = ev.spec();
  if (q.i <= spec.n0() || q.i >= spec.n() - 1) throw std::out_of_range("phiFast: needs n0 < i < n-1");
  // the naive engine supplies the query checks and the common modulus
  const int n = spec.n();
  Prepared pr;
  pr.s = n - q.i;
  out.sum = PhiSum{};
  const i64 MW = spec.whittaker_modulus(q.i);
  pr.M = lcm_checked(MW, ipow(spec.p(), pr.s));
  out.sum.num = RootSum(pr.M);
  if (!in_support(spec, q.i, q.a, q.m)) {
    pr.zero = true;
    out.sum.structural_zero = true;
    return pr;
  }
  if (q.m.context()->K() < n + pr.s || q.a.context()->K() < n) throw std::domain_error("phiFast: insufficient precision");
  pr.au = q.a.unit_mod(n);
  pr.mu_ = q.m.fractional_part().first;
  return pr;
}

}  // namespace

FastResult phiFastPS(const PhiEvaluator& ev, const MatCoefQuery& q, int refine) {
  const auto& spec = ev.spec();
  if (!spec.is_ps()) throw std::invalid_argument("phiFastPS: not a principal series");
  FastResult out;
  const auto pr = prepare(ev, q, out);
  if (pr.zero) return out;
  const i64 p = spec.p();
  const int n0 = spec.n0(), s = pr.s;
  const int cx = (n0 + 1) / 2 + refine, cu = (s + 1) / 2 + refine;
  if (refine < 0 || cx > n0 || cu > s) throw std::out_of_range("phiFastPS: refine too large");
  const int ex = n0 - cx, eu = s - cu;
  const i64 pn0 = ipow(p, n0), ps = ipow(p, s), pcx = ipow(p, cx), pcu = ipow(p, cu);
  const i64 pex = ipow(p, ex), peu = ipow(p, eu);
  const i64 M = pr.M;
  const auto& mu = spec.mu();
  const auto alpha = alphaOfChi(mu, spec.context());
  if (alpha.valuation() != -n0) throw std::logic_error("phiFastPS: alpha has the wrong valuation");
  const i64 al = alpha.unit_mod(n0);
  const i64 a = pr.au % pn0, m = pr.mu_;
  const i64 d = ipow(p, n0 - s);  // varpi^{i - n0}
  // u0^2 + 2 d u0 - a / m = 0 mod p^{eu}
  const auto roots = solveQuadraticCongruence(1, 2 * d, -mulmod(a, invmod(m, ps), ps), p, eu);
  for (i64 r : roots) {
    for (i64 u0 = r; u0 < pcu; u0 += peu) {
      if (u0 % p == 0) continue;
      // inverse of x0 is (a - m d u0) / alpha mod p^{ex}
      const i64 v = floor_mod(a - mulmod(m, mulmod(d, u0, pn0), pn0), pn0);
      i64 y0 = 0;
      if (ex > 0) {
        if (v % p == 0) continue;
        y0 = mulmod(v % pex, invmod(al % pex, pex), pex);
      }
      for (i64 y = y0; y < pcx; y += pex) {
        if (y % p == 0) continue;
        ++out.candidates;
        const i64 x0 = invmod(y, pcx);
        const i64 cxond = floor_mod(al - mulmod(a, x0, pn0) + mulmod(m, mulmod(d, mulmod(x0, u0, pn0), pn0), pn0), pn0);
        if (cxond % pex != 0) continue;
        const i64 cuond = floor_mod(mulmod(m, mulmod(x0, mulmod(u0, u0 + d, pn0), pn0), pn0) - al, pn0);
        if (cuond % peu != 0) continue;
        CriticalPair cp;
        cp.x0 = x0;
        cp.u0 = u0;
        const i64 ax = mulmod(a, x0, pn0);
        cp.phase = psi_exponent(mulmod(m, mulmod(x0, u0, ps), ps), ps, M) +
                   mu.exponent(1 + mulmod(d, invmod(u0, pn0), pn0), M) + mu.exponent(ax, M) + psi_exponent(-ax, pn0, M);
        out.sum.num.add(cp.phase);
        out.pairs.push_back(cp);
      }
    }
  }
  out.sum.terms = static_cast<i64>(out.pairs.size());
  out.sum.scale = Rational(ipow(p, 2 * n0 - cx - cu), phi_prime_power(p, n0));
  return out;
}

FastResult phiFastSC(const PhiEvaluator& ev, const MatCoefQuery& q, int refine) {
  const auto& spec = ev.spec();
  if (spec.is_ps()) throw std::invalid_argument("phiFastSC: not a supercuspidal");
  FastResult out;
  const auto pr = prepare(ev, q, out);
  if (pr.zero) return out;
  const auto& th = spec.theta();
  const auto& E = th.ext();
  const bool ram = E.kind() == ExtKind::Ramified;
  const i64 p = spec.p();
  const int s = pr.s, k = th.level(), c = shell_exponent(th);
  const int cs = (s + 1) / 2 + refine, h = (k + 1) / 2 + refine;
  if (refine < 0 || cs > s || h > k) throw std::out_of_range("phiFastSC: refine too large");
  const int es = s - cs;
  const int j = k / 2;
  // moduli of the two du-coefficient conditions
  const int e2 = ram ? j - (h + 1) / 2 : k - h;
  const int e3 = ram ? j - h / 2 : k - h;
  const i64 M = pr.M;
  const i64 ps = ipow(p, s), pcs = ipow(p, cs), pes = ipow(p, es), pt = ipow(p, shell_psi_level(th));
  const i64 pe2 = ipow(p, e2), pe3 = ipow(p, e3);
  const auto alpha = alphaOfTheta(th, spec.context());
  const int vb = ram ? -j - 1 : -k;
  if (alpha.b.is_zero() || alpha.b.valuation() != vb) throw std::logic_error("phiFastSC: alpha has the wrong valuation");
  const i64 beta = alpha.b.unit_mod(std::max(e3, 1)) % pe3;
  const i64 a = pr.au % ps, m = pr.mu_;
  const i64 ainv = invmod(a, ps);
  const ExtResidueRing ring_h(E, h);
  const i64 ma = ring_h.mod_a(), mb = ring_h.mod_b();
  // shell residues w0 = A + B sqrt D at level h satisfying the b-side condition
  std::vector<ExtResidue> cand;
  if (!ram) {
    for (i64 B = beta; B < mb; B += pe3)
      for (i64 A = 0; A < ma; ++A)
        if (A % p != 0 || B % p != 0) cand.push_back({A, B});
  } else {
    for (i64 A = beta; A < ma; A += pe3)
      if (A % p != 0)
        for (i64 B = 0; B < mb; ++B) cand.push_back({A, B});
  }
  const i64 big = ipow(p, std::max(s, k));
  for (const auto& w0 : cand) {
    const i64 nn = shell_norm_numerator(th, w0, big);
    const i64 nns = nn % ps;
    // x0^2 = -m a / N mod p^{es}
    const i64 rhs = floor_mod(-mulmod(m, mulmod(a, invmod(nns, ps), ps), ps), ps);
    for (i64 r : sqrt_mod_prime_power(rhs % pes, p, es)) {
      for (i64 x0 = r; x0 < pcs; x0 += pes) {
        if (x0 % p == 0) continue;
        ++out.candidates;
        if (floor_mod(mulmod(m, a, ps) + mulmod(mulmod(x0, x0, ps), nns, ps), ps) % pes != 0) continue;
        // x0 N / a as a fraction over p^s, shifted to the du scale
        const i64 z = mulmod(mulmod(x0, ainv, ps), nns, ps);
        const int sh = (ram ? j : k) - s;
        const i64 zs = mulmod(z, ipow(p, sh), pe2 > 1 ? pe2 : 1);
        const i64 coord = ram ? w0.b : w0.a;
        if (floor_mod(coord - zs, pe2) != 0) continue;
        CriticalPair cp;
        cp.x0 = x0;
        cp.w0 = w0;
        cp.phase = psi_exponent(mulmod(m, invmod(x0, ps), ps), ps, M) - th.exponent(c, w0, M) +
                   psi_exponent(-z, ps, M) + psi_exponent(shell_trace_numerator(th, w0), pt, M);
        out.sum.num.add(cp.phase);
        out.pairs.push_back(cp);
      }
    }
  }
  out.sum.terms = static_cast<i64>(out.pairs.size());
  const i64 vol = ExtResidueRing(E, k).size() / ring_h.size();
  out.sum.scale = Rational(checked_mul(ipow(p, es), vol), phi_prime_power(p, s));
  return out;
}

FastResult phiFast(const PhiEvaluator& ev, const MatCoefQuery& q) {
  const auto& spec = ev.spec();
  if (q.i >= spec.n() - 1) {
    FastResult out;
    out.sum = ev.naive(q);
    out.delegated = true;
    return out;
  }
  return spec.is_ps() ? phiFastPS(ev, q) : phiFastSC(ev, q);
}

SpeedupReport speedupReport(const PhiEvaluator& ev, int i, const std::vector<GridPoint>& grid, bool with_literal) {
  using clock = std::chrono::steady_clock;
  const auto& spec = ev.spec();
  SpeedupReport rep;
  std::vector<MatCoefQuery> qs;
  std::vector<GridPoint> pts;
  for (const auto& g : grid) {
    auto q = make_query(spec, i, g);
    if (!in_support(spec, i, q.a, q.m)) continue;
    qs.push_back(q);
    pts.push_back(g);
  }
  if (qs.empty()) return rep;
  (void)ev.naive(qs.front());  // builds the W table outside the timed region
  for (std::size_t t = 0; t < qs.size(); ++t) {
    SpeedupRow row;
    row.point = pts[t];
    auto t0 = clock::now();
    const auto nv = ev.naive(qs[t]);
    auto t1 = clock::now();
    const auto fs = phiFast(ev, qs[t]);
    auto t2 = clock::now();
    row.naive_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.fast_seconds = std::chrono::duration<double>(t2 - t1).count();
    if (with_literal) {
      auto t3 = clock::now();
      (void)ev.naive_literal(qs[t]);
      row.literal_seconds = std::chrono::duration<double>(clock::now() - t3).count();
    }
    row.naive_terms = phi_prime_power(spec.p(), ev.x_level(qs[t])) * spec.sum_size();
    row.fast_pairs = static_cast<i64>(fs.pairs.size());
    const auto vn = ev.value(nv), vf = ev.value(fs.sum);
    const bool zn = ev.exact(nv).is_zero();
    const bool zf = fs.sum.structural_zero || ev.exact(fs.sum).is_zero();
    row.zero_pattern_match = zn == zf;
    row.deviation = zn ? std::abs(vf) : std::abs(vf - vn) / std::abs(vn);
    rep.naive_seconds += row.naive_seconds;
    rep.fast_seconds += row.fast_seconds;
    rep.literal_seconds += row.literal_seconds;
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
    rep.max_pairs = std::max(rep.max_pairs, row.fast_pairs);
    if (!row.zero_pattern_match) ++rep.zero_mismatches;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace newmc
