#include "newmc/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace newmc {

namespace {

std::complex<double> zeta(i64 e, i64 M) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(floor_mod(e, M)) / static_cast<double>(M);
  return {std::cos(t), std::sin(t)};
}

}  // namespace

i64 AdditiveChar::exponent(const PAdicScalar& x, i64 M) const {
  const auto [r, t] = x.fractional_part();
  if (t == 0) return 0;
  const i64 pt = ipow(p_, t);
  if (M % pt != 0) throw std::invalid_argument("AdditiveChar: modulus too small for argument");
  return psi_exponent(r, pt, M);
}

std::complex<double> AdditiveChar::value(const PAdicScalar& x) const {
  const auto [r, t] = x.fractional_part();
  if (t == 0) return 1.0;
  const i64 pt = ipow(p_, t);
  return zeta(r, pt);
}

std::complex<double> AdditiveChar::value_E(const QuadExtElement& x) const { return value(ext_trace(x)); }

MultChar::MultChar(i64 p, int level, i64 c, i64 pi_exp) : p_(p), level_(level), pi_exp_(pi_exp) {
  if (level < 0) throw std::invalid_argument("MultChar: negative level");
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("MultChar: p must be an odd prime");
  order_ = level == 0 ? 1 : phi_prime_power(p, level);
  mod_ = level == 0 ? 1 : ipow(p, level);
  c_ = floor_mod(c, order_);
  pi_exp_ = floor_mod(pi_exp, order_);
  if (level > 0) logs_ = std::make_shared<const DiscreteLog>(p, level);
}

i64 MultChar::exponent(i64 u, i64 M) const {
  if (M % order_ != 0) throw std::invalid_argument("MultChar: modulus not divisible by character order");
  if (level_ == 0) return 0;
  const i64 t = logs_->log(u);
  return mulmod(c_, t, order_) * (M / order_);
}

std::complex<double> MultChar::value(i64 u) const { return zeta(exponent(u, order_), order_); }

int MultChar::conductor() const {
  if (level_ == 0) return 0;
  // U_j / U_level is cyclic, generated by 1 + p^j
  for (int j = 0; j <= level_; ++j) {
    bool trivial = true;
    if (j == 0) {
      for (i64 u = 1; u < mod_ && trivial; ++u)
        if (u % p_ != 0 && exponent(u, order_) != 0) trivial = false;
    } else if (j < level_) {
      trivial = exponent(1 + ipow(p_, j), order_) == 0;
    }
    if (trivial) return j;
  }
  return level_;
}

ThetaChar::ThetaChar(const QuadExtContext& E, int level, i64 value_order, std::vector<std::int32_t> table, i64 pi_exp)
    : ext_(E), level_(level), ring_(E, level), order_(value_order), table_(std::move(table)), pi_exp_(pi_exp) {
  if (static_cast<i64>(table_.size()) != ring_.size()) throw std::invalid_argument("ThetaChar: table size mismatch");
}

i64 ThetaChar::unit_exponent(const ExtResidue& w) const {
  const auto r = ring_.reduce(w.a, w.b);
  const auto t = table_[static_cast<std::size_t>(ring_.index(r))];
  if (t < 0) throw std::domain_error("ThetaChar: argument is not a unit");
  return t;
}

i64 ThetaChar::exponent(int c, const ExtResidue& w, i64 M) const {
  if (M % order_ != 0) throw std::invalid_argument("ThetaChar: modulus not divisible by character order");
  const i64 e = floor_mod(static_cast<i64>(c) * pi_exp_ + unit_exponent(w), order_);
  return e * (M / order_);
}

std::complex<double> ThetaChar::value(int c, const ExtResidue& w) const { return zeta(exponent(c, w, order_), order_); }

ThetaChar ThetaChar::conjugate() const {
  std::vector<std::int32_t> t(table_.size(), -1);
  for (i64 idx = 0; idx < ring_.size(); ++idx) {
    const auto x = ring_.from_index(idx);
    const auto cx = ring_.reduce(x.a, -x.b);
    t[static_cast<std::size_t>(idx)] = table_[static_cast<std::size_t>(ring_.index(cx))];
  }
  // conj(sqrt p) = -sqrt p and theta(-1) = 1, so theta(varpi_E) is unchanged
  return ThetaChar(ext_, level_, order_, std::move(t), pi_exp_);
}

ThetaChar ThetaChar::with_flipped_pi_sign() const {
  if (ext_.kind() != ExtKind::Ramified) throw std::logic_error("theta(varpi_E) is forced in the unramified case");
  return ThetaChar(ext_, level_, order_, table_, floor_mod(pi_exp_ + order_ / 2, order_));
}

int ThetaChar::conductor() const {
  // smallest j such that theta is trivial on 1 + p_E^j (mod p_E^level)
  const i64 p = ext_.p();
  for (int j = 0; j <= level_; ++j) {
    if (j == level_) return j;
    bool trivial = true;
    for (i64 idx = 0; idx < ring_.size() && trivial; ++idx) {
      const auto x = ring_.from_index(idx);
      if (!ring_.is_unit(x)) continue;
      // x - 1 in p_E^j
      const i64 da = floor_mod(x.a - 1, ring_.mod_a()), db = x.b;
      const int ea = ext_.a_exp(j), eb = ext_.b_exp(j);
      if (da % ipow(p, ea) != 0 || db % ipow(p, eb) != 0) continue;
      if (table_[static_cast<std::size_t>(idx)] != 0) trivial = false;
    }
    if (trivial) return j;
  }
  return level_;
}

namespace {

struct Egcd {
  i64 g, s, t;
};

Egcd egcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

using Mat = std::vector<std::vector<i64>>;

}  // namespace

AbelianStructure smith_structure(const std::vector<std::vector<i64>>& relations, int r, i64 N) {
  // HNF modulo N: rows of H span the relation lattice, which contains N Z^r
  Mat H(static_cast<std::size_t>(r), std::vector<i64>(static_cast<std::size_t>(r), 0));
  for (int i = 0; i < r; ++i) H[i][i] = N;
  for (const auto& rel : relations) {
    std::vector<i64> v(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) v[i] = floor_mod(rel[i], N);
    for (int i = 0; i < r; ++i) {
      if (v[i] == 0) continue;
      const auto [g, s, t] = egcd(H[i][i], v[i]);
      const i64 hi = H[i][i] / g, vi = v[i] / g;
      std::vector<i64> row(static_cast<std::size_t>(r)), nv(static_cast<std::size_t>(r));
      for (int j = 0; j < r; ++j) {
        row[j] = floor_mod(static_cast<i64>((static_cast<__int128>(s) * H[i][j] + static_cast<__int128>(t) * v[j]) % N), N);
        nv[j] = floor_mod(static_cast<i64>((static_cast<__int128>(hi) * v[j] - static_cast<__int128>(vi) * H[i][j]) % N), N);
      }
      row[i] = g;
      nv[i] = 0;
      H[i] = row;
      v = nv;
    }
  }
  // Smith normal form of H with column transform Q
  Mat A = H;
  Mat Q(static_cast<std::size_t>(r), std::vector<i64>(static_cast<std::size_t>(r), 0));
  for (int i = 0; i < r; ++i) Q[i][i] = 1;
  auto col_combine = [&](int a, int b, i64 s, i64 t, i64 u, i64 w) {
    // (col_a, col_b) <- (s col_a + t col_b, u col_a + w col_b)
    for (auto* M : {&A, &Q})
      for (auto& row : *M) {
        const i64 x = row[a], y = row[b];
        row[a] = s * x + t * y;
        row[b] = u * x + w * y;
      }
  };
  auto row_combine = [&](int a, int b, i64 s, i64 t, i64 u, i64 w) {
    for (int j = 0; j < r; ++j) {
      const i64 x = A[a][j], y = A[b][j];
      A[a][j] = s * x + t * y;
      A[b][j] = u * x + w * y;
    }
  };
  for (int k = 0; k < r; ++k) {
    for (;;) {
      // pivot: smallest nonzero entry in the trailing block
      int pi = -1, pj = -1;
      for (int i = k; i < r; ++i)
        for (int j = k; j < r; ++j)
          if (A[i][j] != 0 && (pi < 0 || std::abs(A[i][j]) < std::abs(A[pi][pj]))) pi = i, pj = j;
      if (pi < 0) break;
      if (pi != k) std::swap(A[pi], A[k]);
      if (pj != k) col_combine(k, pj, 0, 1, 1, 0);
      bool clean = true;
      for (int i = k + 1; i < r; ++i) {
        if (A[i][k] == 0) continue;
        const auto [g, s, t] = egcd(A[k][k], A[i][k]);
        const i64 a = A[k][k] / g, b = A[i][k] / g;
        row_combine(k, i, s, t, -b, a);
        clean = false;
      }
      for (int j = k + 1; j < r; ++j) {
        if (A[k][j] == 0) continue;
        const auto [g, s, t] = egcd(A[k][k], A[k][j]);
        const i64 a = A[k][k] / g, b = A[k][j] / g;
        col_combine(k, j, s, t, -b, a);
        clean = false;
      }
      if (!clean) continue;
      // divisibility: A[k][k] must divide the trailing block
      bool divides = true;
      for (int i = k + 1; i < r && divides; ++i)
        for (int j = k + 1; j < r; ++j)
          if (A[i][j] % A[k][k] != 0) {
            row_combine(k, i, 1, 1, 0, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    // keep entries of Q small
    for (auto& row : Q)
      for (auto& x : row) x = floor_mod(x, N);
  }
  AbelianStructure out;
  for (int k = 0; k < r; ++k) {
    const i64 d = std::abs(A[k][k]);
    if (d == 0) throw std::logic_error("smith_structure: relation lattice not full rank");
    if (d == 1) continue;
    out.invariants.push_back(d);
  }
  out.Q.assign(static_cast<std::size_t>(r), {});
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k)
      if (std::abs(A[k][k]) != 1) out.Q[i].push_back(floor_mod(Q[i][k], std::abs(A[k][k])));
  return out;
}

ThetaChar buildTheta(const QuadExtContext& E, int target_level, ThetaOptions opts) {
  if (target_level < 2) throw std::invalid_argument("buildTheta: target level must be >= 2");
  if (E.kind() == ExtKind::Ramified && target_level % 2 != 0)
    throw std::invalid_argument("buildTheta: a ramified character trivial on F^x has even conductor");
  if (opts.pi_sign != 1 && opts.pi_sign != -1) throw std::invalid_argument("buildTheta: pi_sign must be +1 or -1");
  if (E.kind() == ExtKind::Unramified && opts.pi_sign != 1)
    throw std::invalid_argument("buildTheta: theta(varpi) = 1 is forced in the unramified case");
  const ExtResidueRing ring(E, target_level);
  const i64 N = ring.unit_count();
  if (N > kShellBudget) throw std::length_error("buildTheta: enumeration budget exceeded");
  const std::size_t size = static_cast<std::size_t>(ring.size());
  const ExtResidue one{1 % ring.mod_a(), 0};

  // generators by order of discovery, coordinates by BFS
  std::vector<ExtResidue> gens;
  std::vector<std::vector<std::int32_t>> coords;
  std::vector<char> seen;
  auto closure = [&](bool collect, std::vector<std::vector<i64>>* rels) {
    seen.assign(size, 0);
    coords.assign(size, {});
    std::vector<i64> queue;
    const i64 root = ring.index(one);
    seen[static_cast<std::size_t>(root)] = 1;
    coords[static_cast<std::size_t>(root)].assign(gens.size(), 0);
    queue.push_back(root);
    i64 count = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const auto x = ring.from_index(queue[h]);
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const i64 y = ring.index(ring.mul(x, gens[g]));
        auto cx = coords[static_cast<std::size_t>(queue[h])];
        cx[g] += 1;
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          coords[static_cast<std::size_t>(y)] = cx;
          queue.push_back(y);
          ++count;
        } else if (collect) {
          std::vector<i64> rel(gens.size());
          for (std::size_t j = 0; j < gens.size(); ++j) rel[j] = cx[j] - coords[static_cast<std::size_t>(y)][j];
          rels->push_back(std::move(rel));
        }
      }
    }
    return count;
  };
  closure(false, nullptr);
  for (i64 idx = 0; idx < ring.size(); ++idx) {
    const auto x = ring.from_index(idx);
    if (!ring.is_unit(x) || seen[static_cast<std::size_t>(idx)]) continue;
    gens.push_back(x);
    if (closure(false, nullptr) == N) break;
  }
  std::vector<std::vector<i64>> rels;
  if (closure(true, &rels) != N) throw std::logic_error("buildTheta: generators do not span the unit group");
  const int r = static_cast<int>(gens.size());
  const auto S = smith_structure(rels, r, N);
  i64 order = 1;
  for (i64 d : S.invariants) order = std::lcm(order, d);
  i64 det = 1;
  for (i64 d : S.invariants) det *= d;
  if (det != N) throw std::logic_error("buildTheta: group order mismatch");
  order = std::lcm(order, i64{2});

  // invariant-factor coordinates of a unit
  const std::size_t s = S.invariants.size();
  auto invariant_coords = [&](const ExtResidue& x) {
    const auto& c = coords[static_cast<std::size_t>(ring.index(x))];
    std::vector<i64> y(s, 0);
    for (std::size_t k = 0; k < s; ++k) {
      __int128 acc = 0;
      for (int i = 0; i < r; ++i) acc += static_cast<__int128>(c[static_cast<std::size_t>(i)]) * S.Q[static_cast<std::size_t>(i)][k];
      y[k] = floor_mod(static_cast<i64>(acc % S.invariants[k]), S.invariants[k]);
    }
    return y;
  };
  auto char_exponent = [&](const std::vector<i64>& cvec, const std::vector<i64>& y) {
    __int128 acc = 0;
    for (std::size_t k = 0; k < s; ++k) acc += static_cast<__int128>(cvec[k]) * y[k] % S.invariants[k] * (order / S.invariants[k]);
    return floor_mod(static_cast<i64>(acc % order), order);
  };

  // F-units: cyclic, generated by a primitive root mod p^{a_exp}
  const int ea = E.a_exp(target_level);
  const i64 g = primitive_root_prime_power(E.p(), ea);
  const auto y_funit = invariant_coords(ring.reduce(g, 0));
  // generators of 1 + p_E^{k-1} modulo p_E^k
  std::vector<std::vector<i64>> y_top;
  const int km = target_level - 1;
  if (E.kind() == ExtKind::Unramified) {
    const i64 pk = ipow(E.p(), km);
    y_top.push_back(invariant_coords(ring.reduce(1 + pk, 0)));
    y_top.push_back(invariant_coords(ring.reduce(1, pk)));
  } else if (km % 2 == 0) {
    y_top.push_back(invariant_coords(ring.reduce(1 + ipow(E.p(), km / 2), 0)));
  } else {
    y_top.push_back(invariant_coords(ring.reduce(1, ipow(E.p(), km / 2))));
  }

  std::vector<i64> cvec(s, 0);
  i64 found = -1;
  for (i64 idx = 0; idx < N; ++idx) {
    i64 rem = idx;
    for (std::size_t k = 0; k < s; ++k) {
      cvec[k] = rem % S.invariants[k];
      rem /= S.invariants[k];
    }
    if (char_exponent(cvec, y_funit) != 0) continue;
    bool nontrivial_top = false;
    for (const auto& y : y_top)
      if (char_exponent(cvec, y) != 0) nontrivial_top = true;
    if (!nontrivial_top) continue;
    if (++found == opts.choice) break;
  }
  if (found != opts.choice) throw std::logic_error("buildTheta: no character with the requested conductor");

  std::vector<std::int32_t> table(size, -1);
  for (i64 idx = 0; idx < ring.size(); ++idx) {
    const auto x = ring.from_index(idx);
    if (!ring.is_unit(x)) continue;
    table[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(char_exponent(cvec, invariant_coords(x)));
  }
  const i64 pi_exp = opts.pi_sign == 1 ? 0 : order / 2;
  return ThetaChar(E, target_level, order, std::move(table), pi_exp);
}

PAdicScalar alphaOfChi(const MultChar& chi, const ContextPtr& ctx) {
  const int a = chi.level();
  if (a <= 1) throw std::invalid_argument("lemma inapplicable");
  if (ctx->p() != chi.p()) throw std::invalid_argument("alphaOfChi: context prime mismatch");
  const i64 p = chi.p();
  const int h = a / 2, lo = a - h;  // dx in p^lo, alpha dx depends on u mod p^h
  const i64 ph = ipow(p, h), plo = ipow(p, lo);
  const i64 L = lcm_checked(chi.order(), ph);
  std::vector<i64> chi_exp(static_cast<std::size_t>(ph));
  for (i64 t = 0; t < ph; ++t) chi_exp[static_cast<std::size_t>(t)] = chi.exponent(1 + plo * t, L);
  for (i64 u = 1; u < ph; ++u) {
    if (u % p == 0) continue;
    bool ok = true;
    for (i64 t = 0; t < ph && ok; ++t)
      if (psi_exponent(u * t, ph, L) != chi_exp[static_cast<std::size_t>(t)]) ok = false;
    if (ok) return PAdicScalar::make(ctx, -a, u);
  }
  throw std::logic_error("alphaOfChi: no alpha found (internal inconsistency)");
}

QuadExtElement alphaOfTheta(const ThetaChar& theta, const ContextPtr& ctx) {
  const int k = theta.level();
  if (k <= 1) throw std::invalid_argument("lemma inapplicable");
  const auto& E = theta.ext();
  const auto& ring = theta.ring();
  const i64 p = E.p();
  const int lo = ceil_div(k, 2);
  const bool ram = E.kind() == ExtKind::Ramified;
  // alpha = beta sqrt D, v(beta) = vb; psi_E(alpha du) = psi(2 D beta db)
  const int vb = ram ? -(k / 2) - 1 : -k;
  const int ea_lo = E.a_exp(lo), eb_lo = E.b_exp(lo);
  const int dep = ram ? -vb - 1 - eb_lo : -vb - eb_lo;  // beta unit needed modulo p^dep
  const i64 pdep = ipow(p, dep);
  const i64 P = ipow(p, -vb);
  const i64 L = lcm_checked(theta.value_order(), P);
  // all du = da + sqrt D db in p_E^lo modulo p_E^k
  struct Probe {
    i64 db;
    i64 exp;
  };
  std::vector<Probe> probes;
  const i64 sa = ipow(p, ea_lo), sb = ipow(p, eb_lo);
  for (i64 da = 0; da < ring.mod_a(); da += sa)
    for (i64 db = 0; db < ring.mod_b(); db += sb)
      probes.push_back({db, theta.unit_exponent(ring.reduce(1 + da, db)) * (L / theta.value_order())});
  const i64 twoD = floor_mod(2 * E.D_int(), P);
  for (i64 w = 1; w < pdep; ++w) {
    if (w % p == 0) continue;
    bool ok = true;
    for (const auto& pr : probes)
      if (psi_exponent(mulmod(mulmod(twoD, w, P), pr.db, P), P, L) != pr.exp) {
        ok = false;
        break;
      }
    if (ok) return {PAdicScalar::zero(ctx), PAdicScalar::make(ctx, vb, w)};
  }
  throw std::logic_error("alphaOfTheta: no alpha found (internal inconsistency)");
}

i64 gauss_modulus_ps(const MultChar& mu, int n0) { return lcm_checked(mu.order(), ipow(mu.p(), n0)); }

RootSum gauss_sum_ps(const MultChar& mu, int n0, i64 M) {
  RootSum s(M);
  const i64 pn = ipow(mu.p(), n0);
  for (i64 u = 1; u < pn; ++u) {
    if (u % mu.p() == 0) continue;
    s.add(mu.exponent(u, M) + psi_exponent(-u, pn, M));
  }
  return s;
}

CycloValue gaussC0PrincipalSeries(const MultChar& mu, std::optional<int> n0) {
  const int n = n0.value_or(mu.level());
  if (n < 1) throw std::invalid_argument("gaussC0PrincipalSeries: n0 must be >= 1");
  const i64 M = gauss_modulus_ps(mu, n);
  return CycloValue::from_sum(gauss_sum_ps(mu, n, M)).scaled(Rational(1, ipow(mu.p(), n)));
}

int shell_exponent(const ThetaChar& theta) { return -theta.level() - theta.ext().e() + 1; }

int shell_psi_level(const ThetaChar& theta) {
  return theta.ext().kind() == ExtKind::Ramified ? theta.level() / 2 : theta.level();
}

i64 shell_trace_numerator(const ThetaChar& theta, const ExtResidue& w) {
  // unramified: u = p^{-k}(A + B sqrt D), tr u = 2A / p^k
  // ramified:   u = p^{-j} B + p^{-j-1} A sqrt p, tr u = 2B / p^j
  const i64 pt = ipow(theta.ext().p(), shell_psi_level(theta));
  const i64 v = theta.ext().kind() == ExtKind::Ramified ? w.b : w.a;
  return floor_mod(2 * floor_mod(v, pt), pt);
}

i64 shell_norm_numerator(const ThetaChar& theta, const ExtResidue& w, i64 mod) {
  // N(u) = num / p^n: unramified num = A^2 - D B^2; ramified num = p B^2 - A^2
  const auto& E = theta.ext();
  if (E.kind() == ExtKind::Ramified)
    return floor_mod(E.p() * mulmod(w.b, w.b, mod) - mulmod(w.a, w.a, mod), mod);
  return floor_mod(mulmod(w.a, w.a, mod) - E.D_int() * mulmod(w.b, w.b, mod), mod);
}

i64 gauss_modulus_sc(const ThetaChar& theta) {
  return lcm_checked(theta.value_order(), ipow(theta.ext().p(), shell_psi_level(theta)));
}

RootSum gauss_sum_sc(const ThetaChar& theta, i64 M) {
  RootSum s(M);
  const int c = shell_exponent(theta);
  const i64 pt = ipow(theta.ext().p(), shell_psi_level(theta));
  for (const auto& w : unitShellReps(theta.ext(), theta.level()))
    s.add(-theta.exponent(c, w, M) + psi_exponent(shell_trace_numerator(theta, w), pt, M));
  return s;
}

CycloValue gaussC0Supercuspidal(const ThetaChar& theta) {
  const i64 M = gauss_modulus_sc(theta);
  const auto v = CycloValue::from_sum(gauss_sum_sc(theta, M)).scaled(Rational(1, theta.ring().size()));
  if (std::abs(v.embed()) < 1e-12) throw std::logic_error("gaussC0Supercuspidal: vanishing Gauss sum (theta not primitive)");
  return v;
}

}  // namespace newmc
