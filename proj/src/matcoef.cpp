#include "newmc/matcoef.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

namespace newmc {

PhiEvaluator::PhiEvaluator(ReprSpec spec) : spec_(std::move(spec)) {
  c0_ = spec_.c0_sum(spec_.whittaker_modulus(spec_.n())).embed();
}

void PhiEvaluator::validate(const MatCoefQuery& q) const {
  if (q.i <= spec_.n0() || q.i > spec_.n()) throw std::out_of_range("matcoef: i must satisfy n0 < i <= n");
  for (const auto* x : {&q.a, &q.m}) {
    if (!x->context()) throw std::invalid_argument("matcoef: unbound argument");
    if (x->context()->p() != spec_.p()) throw std::invalid_argument("matcoef: prime mismatch");
  }
  if (q.a.is_zero()) throw std::invalid_argument("matcoef: a must be nonzero");
  int need = spec_.n();
  if (!q.m.is_zero()) need = std::max(need, spec_.n() - q.m.valuation());
  if (q.m.context()->K() < need || q.a.context()->K() < spec_.n())
    throw std::domain_error("matcoef: insufficient precision");
}

int PhiEvaluator::x_level(const MatCoefQuery& q) const {
  int k = std::max(1, spec_.whittaker_level(q.i));
  if (!q.m.is_zero() && q.m.valuation() < 0) k = std::max(k, -q.m.valuation());
  return k;
}

const PhiEvaluator::Table& PhiEvaluator::table(int i) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tables_.find(i);
  if (it != tables_.end()) return *it->second;
  auto t = std::make_shared<Table>();
  const i64 p = spec_.p();
  t->modulus = spec_.whittaker_modulus(i);
  t->pw = ipow(p, std::max(1, spec_.whittaker_level(i)));
  t->hist.resize(static_cast<std::size_t>(t->pw));
  for (i64 y = 1; y < t->pw; ++y) {
    if (y % p == 0) continue;
    RootSum s(t->modulus);
    spec_.accumulate_whittaker(i, y, s);
    auto& h = t->hist[static_cast<std::size_t>(y)];
    const auto& cnt = s.counts();
    for (std::size_t e = 0; e < cnt.size(); ++e)
      if (cnt[e] != 0) h.emplace_back(static_cast<std::int32_t>(e), static_cast<std::int32_t>(cnt[e]));
  }
  tables_.emplace(i, t);
  return *t;
}

PhiSum PhiEvaluator::sum(const MatCoefQuery& q, int extra, bool literal) const {
  validate(q);
  const i64 p = spec_.p();
  const int k = x_level(q) + extra;
  int t = 0;
  i64 r = 0;
  if (!q.m.is_zero() && q.m.valuation() < 0) {
    auto fr = q.m.fractional_part();
    r = fr.first;
    t = fr.second;
  }
  const i64 pt = ipow(p, t);
  const i64 MW = spec_.whittaker_modulus(q.i);
  const i64 M = lcm_checked(MW, pt);
  PhiSum out;
  out.num = RootSum(M);
  out.scale = Rational(1, phi_prime_power(p, k));
  if (q.a.valuation() != 0) {
    out.structural_zero = true;
    return out;
  }
  const i64 pk = ipow(p, k);
  const i64 au = q.a.unit_mod(k);
  if (literal) {
    for (i64 x = 1; x < pk; ++x) {
      if (x % p == 0) continue;
      const i64 ex = t > 0 ? psi_exponent(mulmod(r, x, pt), pt, M) : 0;
      spec_.accumulate_whittaker(q.i, mulmod(au, x, pk), out.num, ex);
      out.terms += spec_.sum_size();
    }
    return out;
  }
  const auto& tab = table(q.i);
  const i64 step = M / MW;
  for (i64 x = 1; x < pk; ++x) {
    if (x % p == 0) continue;
    const i64 ex = t > 0 ? psi_exponent(mulmod(r, x, pt), pt, M) : 0;
    const auto& h = tab.hist[static_cast<std::size_t>(mulmod(au, x, tab.pw))];
    for (const auto& [e, c] : h) out.num.add(ex + step * e, c);
    out.terms += static_cast<i64>(h.size());
  }
  return out;
}

PhiSum PhiEvaluator::naive(const MatCoefQuery& q) const { return sum(q, 0, false); }
PhiSum PhiEvaluator::naive_literal(const MatCoefQuery& q) const { return sum(q, 0, true); }
PhiSum PhiEvaluator::naive_at_level(const MatCoefQuery& q, int extra) const { return sum(q, extra, false); }

std::complex<double> PhiEvaluator::value(const PhiSum& s) const {
  if (s.structural_zero) return 0.0;
  const double sc = static_cast<double>(s.scale.numerator()) / static_cast<double>(s.scale.denominator());
  return s.num.embed() * sc / c0_;
}

CycloRatio PhiEvaluator::exact(const PhiSum& s) const {
  const i64 M = s.num.modulus();
  std::shared_ptr<const CycloValue> den;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = c0_exact_[M];
    if (!slot) slot = std::make_shared<const CycloValue>(CycloValue::from_sum(spec_.c0_sum(M)));
    den = slot;
  }
  CycloValue num = s.structural_zero ? CycloValue(M) : CycloValue::from_sum(s.num).scaled(s.scale);
  return {std::move(num), *den};
}

CycloRatio phiNaive(const PhiEvaluator& ev, const MatCoefQuery& q) { return ev.exact(ev.naive(q)); }

bool in_support(const ReprSpec& spec, int i, const PAdicScalar& a, const PAdicScalar& m) {
  if (a.is_zero() || a.valuation() != 0) return false;
  const int n = spec.n();
  if (i >= n - 1) return m.is_zero() || m.valuation() >= -1;
  return !m.is_zero() && m.valuation() == i - n;
}

namespace {

i64 random_unit(i64 p, i64 mod, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(1, mod - 1);
  for (;;) {
    const i64 u = d(rng);
    if (u % p != 0) return u;
  }
}

}  // namespace

std::vector<GridPoint> support_grid(const ReprSpec& spec, int i, int min_points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const i64 p = spec.p();
  const i64 mod = ipow(p, spec.n());
  std::vector<std::pair<bool, int>> mcells;
  for (int vm = i - spec.n() - 2; vm <= 1; ++vm) mcells.emplace_back(false, vm);
  mcells.emplace_back(true, 0);
  const int cells = 4 * static_cast<int>(mcells.size());
  const int per = std::max(1, (min_points + cells - 1) / cells);
  std::vector<GridPoint> grid;
  for (int va = -1; va <= 2; ++va)
    for (const auto& [mz, vm] : mcells)
      for (int s = 0; s < per; ++s) {
        GridPoint g;
        g.v_a = va;
        g.a_unit = random_unit(p, mod, rng);
        g.m_zero = mz;
        g.v_m = vm;
        g.m_unit = mz ? 0 : random_unit(p, mod, rng);
        grid.push_back(g);
      }
  return grid;
}

MatCoefQuery make_query(const ReprSpec& spec, int i, const GridPoint& g) {
  const auto& ctx = spec.context();
  MatCoefQuery q;
  q.i = i;
  q.a = PAdicScalar::make(ctx, g.v_a, g.a_unit);
  q.m = g.m_zero ? PAdicScalar::zero(ctx) : PAdicScalar::make(ctx, g.v_m, g.m_unit);
  return q;
}

SupportReport verifySupport(const PhiEvaluator& ev, int i, const std::vector<GridPoint>& grid) {
  SupportReport rep;
  for (const auto& g : grid) {
    const auto q = make_query(ev.spec(), i, g);
    const auto s = ev.naive(q);
    SupportRow row;
    row.point = g;
    row.expected_zero = !in_support(ev.spec(), i, q.a, q.m);
    row.value = ev.value(s);
    row.exact_zero = s.structural_zero || ev.exact(s).is_zero();
    row.violation = row.expected_zero && !row.exact_zero;
    if (row.violation) ++rep.violations;
    rep.max_abs = std::max(rep.max_abs, std::abs(row.value));
    rep.rows.push_back(row);
  }
  rep.nonzero_outside = rep.violations;
  return rep;
}

DecayReport verifyDecay(const PhiEvaluator& ev, int i, int samples, std::uint64_t seed) {
  const auto& spec = ev.spec();
  const int n = spec.n();
  if (i <= spec.n0() || i >= n - 1) throw std::out_of_range("verifyDecay: needs n0 < i < n-1");
  const i64 p = spec.p();
  const double q = static_cast<double>(p);
  DecayReport rep;
  rep.bound = spec.is_ps() ? 2 * q * q : q * q * q;
  const double norm = std::pow(q, 0.5 * (n - i));
  std::vector<GridPoint> pts;
  if (samples <= 0) {
    const i64 pa = ipow(p, std::max(1, spec.whittaker_level(i)));
    const i64 pm = ipow(p, n - i);
    for (i64 a = 1; a < pa; ++a)
      for (i64 m = 1; m < pm; ++m)
        if (a % p != 0 && m % p != 0) pts.push_back({0, a, false, i - n, m});
  } else {
    std::mt19937_64 rng(seed);
    const i64 mod = ipow(p, n);
    for (int s = 0; s < samples; ++s) pts.push_back({0, random_unit(p, mod, rng), false, i - n, random_unit(p, mod, rng)});
  }
  for (const auto& g : pts) {
    DecayRow row;
    row.point = g;
    row.value = ev.value(ev.naive(make_query(spec, i, g)));
    row.ratio = std::abs(row.value) * norm;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

int KStarElement::level() const {
  const i64 mod = modulus();
  int v = P;
  if (floor_mod(b, mod) != 0) v = std::min(v, int_valuation(floor_mod(b, mod), p));
  if (floor_mod(c, mod) != 0) v = std::min(v, int_valuation(floor_mod(c, mod), p));
  return v;
}

bool KStarElement::valid() const {
  return a % p != 0 && d % p != 0 && floor_mod(b, p) == 0 && floor_mod(c, p) == 0;
}

KStarElement KStarElement::operator*(const KStarElement& o) const {
  if (o.p != p || o.P != P) throw std::invalid_argument("KStarElement: mismatched precision");
  const i64 mod = modulus();
  KStarElement r{p, P, 0, 0, 0, 0};
  r.a = addmod(mulmod(a, o.a, mod), mulmod(b, o.c, mod), mod);
  r.b = addmod(mulmod(a, o.b, mod), mulmod(b, o.d, mod), mod);
  r.c = addmod(mulmod(c, o.a, mod), mulmod(d, o.c, mod), mod);
  r.d = addmod(mulmod(c, o.b, mod), mulmod(d, o.d, mod), mod);
  return r;
}

KStarElement KStarElement::inverse() const {
  const i64 mod = modulus();
  const i64 det = floor_mod(mulmod(a, d, mod) - mulmod(b, c, mod), mod);
  const i64 di = invmod(det, mod);
  return {p, P, mulmod(d, di, mod), floor_mod(-mulmod(b, di, mod), mod), floor_mod(-mulmod(c, di, mod), mod),
          mulmod(a, di, mod)};
}

KStarElement sampleKStar(const ReprSpec& spec, int j, std::mt19937_64& rng) {
  const i64 p = spec.p();
  const int P = spec.n1() + spec.n();
  if (j < 1 || j >= P) throw std::out_of_range("sampleKStar: level out of range");
  const i64 mod = ipow(p, P);
  const i64 rmod = ipow(p, P - j);
  std::uniform_int_distribution<i64> d(0, rmod - 1);
  KStarElement g{p, P, random_unit(p, mod, rng), 0, 0, random_unit(p, mod, rng)};
  i64 rb, rc;
  do {
    rb = d(rng);
    rc = d(rng);
  } while (rb % p == 0 && rc % p == 0);
  g.b = rb * ipow(p, j);
  g.c = rc * ipow(p, j);
  return g;
}

KStarDecomposition decomposeKStar(const KStarElement& g, const ReprSpec& spec) {
  if (g.p != spec.p() || g.P < spec.n1() + spec.n()) throw std::invalid_argument("decomposeKStar: precision below n1 + n");
  if (!g.valid()) throw std::invalid_argument("decomposeKStar: g not in K*(1)");
  const auto& ctx = spec.context();
  const i64 p = g.p, mod = g.modulus();
  const int n = spec.n(), n1 = spec.n1();
  const i64 det = floor_mod(mulmod(g.a, g.d, mod) - mulmod(g.b, g.c, mod), mod);
  // h = a(varpi^{-n1}) g a(varpi^{n1}) = (a, b varpi^{-n1}; c varpi^{n1}, d)
  const auto dd = PAdicScalar::from_integer(ctx, g.d);
  const auto b = floor_mod(g.b, mod);
  const auto m = b == 0 ? PAdicScalar::zero(ctx) : PAdicScalar::from_integer(ctx, b).shift(-n1) / dd;
  const auto D = PAdicScalar::from_integer(ctx, det);
  const i64 c = floor_mod(g.c, mod);
  KStarDecomposition out;
  if (c != 0 && int_valuation(c, p) + n1 < n) {
    const int vc = int_valuation(c, p);
    const auto cu = PAdicScalar::from_integer(ctx, c / ipow(p, vc));
    out.i = vc + n1;
    out.a = D / (dd * cu);
  } else {
    out.i = n;
    out.a = D / (dd * dd);
  }
  out.m = m;
  return out;
}

PhiSum phiPrime(const PhiEvaluator& ev, const KStarElement& g) {
  const auto dec = decomposeKStar(g, ev.spec());
  return ev.naive({dec.i, dec.a, dec.m});
}

GramReport gramDimensionEstimate(const PhiEvaluator& ev, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("gramDimensionEstimate: needs at least one sample");
  const auto& spec = ev.spec();
  const i64 p = spec.p();
  const int P = spec.n1() + spec.n();
  const i64 mod = ipow(p, P);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> d(0, mod / p - 1);
  std::vector<KStarElement> gs;
  for (int s = 0; s < samples; ++s)
    gs.push_back({p, P, random_unit(p, mod, rng), p * d(rng), p * d(rng), random_unit(p, mod, rng)});
  std::vector<KStarElement> inv;
  for (const auto& g : gs) inv.push_back(g.inverse());
  Eigen::MatrixXcd G(samples, samples);
  for (int s = 0; s < samples; ++s)
    for (int t = 0; t < samples; ++t) G(s, t) = ev.value(phiPrime(ev, inv[s] * gs[t]));
  GramReport rep;
  rep.samples = samples;
  rep.hermitian_defect = (G - G.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev_ = es.eigenvalues();
  const double top = std::max(ev_.maxCoeff(), 1e-300);
  rep.min_eigenvalue = ev_.minCoeff() / top;
  for (int s = 0; s < samples; ++s) rep.singular_values.push_back(std::abs(ev_(s)));
  std::sort(rep.singular_values.rbegin(), rep.singular_values.rend());
  const double smax = rep.singular_values.front();
  rep.rank = static_cast<int>(
      std::count_if(rep.singular_values.begin(), rep.singular_values.end(), [&](double v) { return v > tol * smax; }));
  return rep;
}

}  // namespace newmc
