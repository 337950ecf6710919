#include "newmc/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "newmc/characters.hpp"

namespace newmc {

namespace {

i64 rat_mod(const Rational& r, i64 P) {
  return mulmod(floor_mod(r.numerator(), P), invmod(floor_mod(r.denominator(), P), P), P);
}

using RMat = std::array<std::array<Rational, 4>, 4>;

Rational det4(RMat m) {
  Rational det = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4; ++r)
      if (m[r][c].numerator() != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// solves sum_r c_r rows[r] = x
std::array<Rational, 4> solve_rows(const RMat& rows, const std::array<Rational, 4>& x) {
  // augmented system M c = x with M[k][r] = rows[r][k]
  std::array<std::array<Rational, 5>, 4> m;
  for (int k = 0; k < 4; ++k) {
    for (int r = 0; r < 4; ++r) m[k][r] = rows[r][k];
    m[k][4] = x[k];
  }
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4; ++r)
      if (m[r][c].numerator() != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::invalid_argument("singular basis");
    std::swap(m[piv], m[c]);
    for (int r = 0; r < 4; ++r) {
      if (r == c || m[r][c].numerator() == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::array<Rational, 4> out;
  for (int r = 0; r < 4; ++r) out[r] = m[r][4] / m[r][r];
  return out;
}

bool is_integral(const Rational& r) { return r.denominator() == 1; }

i64 isqrt_exact(i64 n) {
  if (n < 0) return -1;
  i64 s = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(n))));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s * s == n ? s : -1;
}

}  // namespace

int localHilbertSymbol(i64 a, i64 b, i64 p) {
  if (a == 0 || b == 0) throw std::invalid_argument("localHilbertSymbol: zero argument");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  const int al = int_valuation(a, p), be = int_valuation(b, p);
  const i64 u = a / ipow(p, al), v = b / ipow(p, be);
  if (p == 2) {
    auto eps = [](i64 x) { return static_cast<int>(floor_mod(x, 4) == 3); };
    auto omega = [](i64 x) {
      const i64 r = floor_mod(x, 8);
      return static_cast<int>(r == 3 || r == 5);
    };
    const int e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
    return e % 2 == 0 ? 1 : -1;
  }
  int s = (al * be % 2 == 1 && (p - 1) / 2 % 2 == 1) ? -1 : 1;
  if (be % 2 == 1) s *= legendre(floor_mod(u, p), p);
  if (al % 2 == 1) s *= legendre(floor_mod(v, p), p);
  return s;
}

QuaternionAlgebra::QuaternionAlgebra(i64 a, i64 b) : a_(a), b_(b) {
  if (a <= 0 || b == 0) throw std::invalid_argument("QuaternionAlgebra: need a > 0 and b != 0");
  std::set<i64> primes{2};
  for (i64 p : prime_factors(std::abs(a))) primes.insert(p);
  for (i64 p : prime_factors(std::abs(b))) primes.insert(p);
  disc_ = 1;
  for (i64 p : primes)
    if (localHilbertSymbol(a, b, p) == -1) {
      ram_.push_back(p);
      disc_ *= p;
    }
}

Quat QuaternionAlgebra::mul(const Quat& x, const Quat& y) const {
  const Rational a(a_), b(b_);
  return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
          x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
          x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Rational QuaternionAlgebra::nr(const Quat& x) const {
  const Rational a(a_), b(b_);
  return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3];
}

i64 QuaternionAlgebra::nr_int(const std::array<i64, 4>& x) const {
  return x[0] * x[0] - a_ * x[1] * x[1] - b_ * x[2] * x[2] + a_ * b_ * x[3] * x[3];
}

std::array<double, 4> QuaternionAlgebra::iota_inf(const std::array<double, 4>& x) const {
  const double sa = std::sqrt(static_cast<double>(a_)), b = static_cast<double>(b_);
  return {x[0] + x[1] * sa, x[2] * b + x[3] * sa * b, x[2] - x[3] * sa, x[0] - x[1] * sa};
}

std::array<Rational, 4> order_coordinates(const RationalOrder& O, const Quat& x) {
  RMat rows;
  for (int r = 0; r < 4; ++r) rows[r] = O.basis[r];
  return solve_rows(rows, x);
}

void check_order(const QuaternionAlgebra& A, const RationalOrder& O) {
  RMat rows;
  for (int r = 0; r < 4; ++r) rows[r] = O.basis[r];
  if (det4(rows).numerator() == 0) throw std::invalid_argument("order: basis is singular");
  for (auto c : order_coordinates(O, {Rational(1), 0, 0, 0}))
    if (!is_integral(c)) throw std::invalid_argument("order: 1 is not in the lattice");
  for (const auto& x : O.basis)
    for (const auto& y : O.basis)
      for (auto c : order_coordinates(O, A.mul(x, y)))
        if (!is_integral(c)) throw std::invalid_argument("order: basis not closed under multiplication");
}

Rational reduced_discriminant(const QuaternionAlgebra& A, const RationalOrder& O) {
  RMat t;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) t[r][s] = A.trd(A.mul(O.basis[r], O.basis[s]));
  Rational d = det4(t);
  if (d < 0) d = -d;
  const i64 n = isqrt_exact(d.numerator()), m = isqrt_exact(d.denominator());
  if (n < 0 || m < 0) throw std::logic_error("reduced_discriminant: discriminant is not a square");
  return Rational(n, m);
}

bool verifyMaximalOrder(const QuaternionAlgebra& A, const RationalOrder& O) {
  check_order(A, O);
  return reduced_discriminant(A, O) == Rational(A.discriminant());
}

IntMat4 hermite_basis(const std::vector<std::array<i64, 4>>& gens) {
  std::vector<std::array<i64, 4>> rows = gens;
  IntMat4 out{};
  std::size_t top = 0;
  for (int c = 0; c < 4; ++c) {
    // gcd-combine column c over rows[top..]
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r)
        if (rows[r][c] != 0 && (best == rows.size() || std::abs(rows[r][c]) < std::abs(rows[best][c]))) best = r;
      if (best == rows.size()) throw std::invalid_argument("hermite_basis: generators not of full rank");
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const i64 f = rows[r][c] / rows[top][c];
        for (int k = 0; k < 4; ++k) rows[r][k] = checked_add(rows[r][k], -checked_mul(f, rows[top][k]));
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][c] < 0)
      for (auto& v : rows[top]) v = -v;
    ++top;
  }
  for (std::size_t r = 4; r < rows.size(); ++r)
    for (i64 v : rows[r])
      if (v != 0) throw std::logic_error("hermite_basis: leftover generator");
  for (int r = 0; r < 4; ++r) out[r] = rows[r];
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < c; ++r) {
      const i64 f = out[r][c] >= 0 ? out[r][c] / out[c][c] : -((-out[r][c] + out[c][c] - 1) / out[c][c]);
      for (int k = 0; k < 4; ++k) out[r][k] -= f * out[c][k];
    }
  return out;
}

std::array<i64, 3> lattice_shape(const IntMat4& basis) {
  i64 N = 1;
  for (int r = 0; r < 4; ++r) N = checked_mul(N, std::abs(basis[r][r]));
  if (N == 1) return {1, 1, 1};
  std::vector<std::vector<i64>> rel;
  for (const auto& row : basis) rel.emplace_back(row.begin(), row.end());
  const auto S = smith_structure(rel, 4, N);
  if (S.invariants.size() > 3) throw std::logic_error("lattice_shape: more than three invariant factors");
  std::array<i64, 3> shape{1, 1, 1};
  const std::size_t off = 3 - S.invariants.size();
  for (std::size_t t = 0; t < S.invariants.size(); ++t) shape[off + t] = S.invariants[t];
  return shape;
}

bool is_tidy(const std::array<i64, 3>& shape) { return (shape[0] * shape[1]) % shape[2] == 0; }

std::array<i64, 4> LocalSplitting::image(const Quat& x) const {
  const i64 P = ipow(p, R);
  auto mm = [&](const std::array<i64, 4>& u, const std::array<i64, 4>& v) {
    return std::array<i64, 4>{addmod(mulmod(u[0], v[0], P), mulmod(u[1], v[2], P), P),
                              addmod(mulmod(u[0], v[1], P), mulmod(u[1], v[3], P), P),
                              addmod(mulmod(u[2], v[0], P), mulmod(u[3], v[2], P), P),
                              addmod(mulmod(u[2], v[1], P), mulmod(u[3], v[3], P), P)};
  };
  const auto K = mm(I, J);
  const i64 c0 = rat_mod(x[0], P), c1 = rat_mod(x[1], P), c2 = rat_mod(x[2], P), c3 = rat_mod(x[3], P);
  std::array<i64, 4> out{};
  for (int t = 0; t < 4; ++t) {
    i64 v = mulmod(c1, I[t], P);
    v = addmod(v, mulmod(c2, J[t], P), P);
    v = addmod(v, mulmod(c3, K[t], P), P);
    if (t == 0 || t == 3) v = addmod(v, c0, P);
    out[t] = v;
  }
  return out;
}

LocalSplitting localSplitting(const QuaternionAlgebra& A, i64 p, int R) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("localSplitting: p must be an odd prime");
  if (A.discriminant() % p == 0) throw std::invalid_argument("localSplitting: p ramifies in the algebra");
  const i64 P = ipow(p, R);
  // first generator g with g^2 = s unit mod p: (0 s; 1 0); second (x, -s z; z, -x), x^2 - s z^2 = t
  bool swap = false;
  i64 s = A.a(), t = A.b();
  if (s % p == 0) {
    if (t % p == 0) throw std::invalid_argument("localSplitting: p divides both a and b");
    std::swap(s, t);
    swap = true;
  }
  i64 x = -1, z = -1;
  for (i64 u = 0; u < p && x < 0; ++u)
    for (i64 w = 0; w < p; ++w)
      if (floor_mod(u * u - s * w * w - t, p) == 0 && (u % p != 0 || w % p != 0)) {
        x = u;
        z = w;
        break;
      }
  if (x < 0) throw std::logic_error("localSplitting: no solution mod p");
  for (int it = 0; it < R + 1; ++it) {
    const i64 f = floor_mod(mulmod(x, x, P) - mulmod(s % P, mulmod(z, z, P), P) - t, P);
    if (f == 0) break;
    if (x % p != 0) {
      x = floor_mod(x - mulmod(f, invmod(floor_mod(2 * x, P), P), P), P);
    } else {
      z = floor_mod(z + mulmod(f, invmod(floor_mod(2 * s * z, P), P), P), P);
    }
  }
  const std::array<i64, 4> G1{0, floor_mod(s, P), 1, 0};
  const std::array<i64, 4> G2{x, floor_mod(-mulmod(floor_mod(s, P), z, P), P), z, floor_mod(-x, P)};
  LocalSplitting out{p, R, swap ? G2 : G1, swap ? G1 : G2};
  return out;
}

namespace {

// x with sum_r x_r T_r = target mod P, T_r the images of the basis
std::array<i64, 4> solve_mod(const std::array<std::array<i64, 4>, 4>& T, const std::array<i64, 4>& target, i64 p, i64 P) {
  std::array<std::array<i64, 5>, 4> m;
  for (int k = 0; k < 4; ++k) {
    for (int r = 0; r < 4; ++r) m[k][r] = T[r][k];
    m[k][4] = target[k];
  }
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4; ++r)
      if (m[r][c] % p != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::logic_error("buildTidyLattice: splitting is not onto M2(Z_p)");
    std::swap(m[piv], m[c]);
    const i64 inv = invmod(m[c][c], P);
    for (auto& v : m[c]) v = mulmod(v, inv, P);
    for (int r = 0; r < 4; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const i64 f = m[r][c];
      for (int k = 0; k < 5; ++k) m[r][k] = floor_mod(m[r][k] - mulmod(f, m[c][k], P), P);
    }
  }
  return {m[0][4], m[1][4], m[2][4], m[3][4]};
}

TidyLattice finish(const RationalOrder& O, const std::vector<std::array<i64, 4>>& gens) {
  TidyLattice L;
  L.parent = O;
  L.basis = hermite_basis(gens);
  L.N = 1;
  for (int r = 0; r < 4; ++r) L.N = checked_mul(L.N, L.basis[r][r]);
  L.shape = lattice_shape(L.basis);
  return L;
}

}  // namespace

TidyLattice trivialLattice(const RationalOrder& O) {
  TidyLattice L;
  L.parent = O;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) L.basis[r][c] = r == c;
  return L;
}

TidyLattice buildTidyLattice(const QuaternionAlgebra& A, const RationalOrder& O, const std::map<i64, int>& plan) {
  check_order(A, O);
  if (plan.empty()) return trivialLattice(O);
  i64 Ptot = 1;
  std::array<i64, 4> e1{0, 0, 0, 0}, e2{0, 0, 0, 0};
  for (const auto& [p, r] : plan) {
    if (r < 1) throw std::invalid_argument("buildTidyLattice: exponents must be positive");
    const auto S = localSplitting(A, p, r);
    const i64 P = ipow(p, r);
    std::array<std::array<i64, 4>, 4> T;
    for (int b = 0; b < 4; ++b) T[b] = S.image(O.basis[b]);
    const auto x1 = solve_mod(T, {1, 0, 0, 0}, p, P);
    const auto x2 = solve_mod(T, {0, 0, 0, 1}, p, P);
    // CRT into the running moduli
    const i64 Pn = checked_mul(Ptot, P);
    const i64 i1 = invmod(Ptot % P, P);
    for (int b = 0; b < 4; ++b) {
      e1[b] = floor_mod(e1[b] + mulmod(Ptot, mulmod(floor_mod(x1[b] - e1[b], P), i1, P), Pn), Pn);
      e2[b] = floor_mod(e2[b] + mulmod(Ptot, mulmod(floor_mod(x2[b] - e2[b], P), i1, P), Pn), Pn);
    }
    Ptot = Pn;
  }
  std::vector<std::array<i64, 4>> gens{e1, e2};
  for (int b = 0; b < 4; ++b) {
    std::array<i64, 4> g{0, 0, 0, 0};
    g[b] = Ptot;
    gens.push_back(g);
  }
  return finish(O, gens);
}

TidyLattice conductorLattice(const QuaternionAlgebra& A, const RationalOrder& O, const Quat& s, i64 M) {
  check_order(A, O);
  if (M < 1) throw std::invalid_argument("conductorLattice: M must be positive");
  std::vector<std::array<i64, 4>> gens;
  for (const auto& x : {Quat{Rational(1), 0, 0, 0}, s}) {
    const auto c = order_coordinates(O, x);
    std::array<i64, 4> g{};
    for (int r = 0; r < 4; ++r) {
      if (!is_integral(c[r])) throw std::invalid_argument("conductorLattice: s is not in the order");
      g[r] = c[r].numerator();
    }
    gens.push_back(g);
  }
  for (int b = 0; b < 4; ++b) {
    std::array<i64, 4> g{0, 0, 0, 0};
    g[b] = M;
    gens.push_back(g);
  }
  return finish(O, gens);
}

bool lattice_contains(const TidyLattice& big, const TidyLattice& small) {
  RMat rows;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rows[r][c] = big.basis[r][c];
  for (const auto& row : small.basis) {
    std::array<Rational, 4> x;
    for (int c = 0; c < 4; ++c) x[c] = row[c];
    for (auto v : solve_rows(rows, x))
      if (!is_integral(v)) return false;
  }
  return true;
}

double hyperbolic_u(const UpperHalfPoint& z1, const UpperHalfPoint& z2) {
  const double dx = z1.x - z2.x, dy = z1.y - z2.y;
  return (dx * dx + dy * dy) / (4 * z1.y * z2.y);
}

UpperHalfPoint mobius(const std::array<double, 4>& g, const UpperHalfPoint& z) {
  const std::complex<double> w(z.x, z.y);
  const auto r = (g[0] * w + g[1]) / (g[2] * w + g[3]);
  return {r.real(), r.imag()};
}

namespace {

std::array<double, 4> conj_sigma(const std::array<double, 4>& g, const UpperHalfPoint& z) {
  // sigma = (sqrt y, x / sqrt y; 0, 1 / sqrt y), sigma^{-1} = (1 / sqrt y, -x / sqrt y; 0, sqrt y)
  const double r = std::sqrt(z.y);
  const std::array<double, 4> s{r, z.x / r, 0, 1 / r}, si{1 / r, -z.x / r, 0, r};
  auto mm = [](const std::array<double, 4>& u, const std::array<double, 4>& v) {
    return std::array<double, 4>{u[0] * v[0] + u[1] * v[2], u[0] * v[1] + u[1] * v[3], u[2] * v[0] + u[3] * v[2],
                                 u[2] * v[1] + u[3] * v[3]};
  };
  return mm(mm(si, g), s);
}

std::array<double, 4> to_double(const Quat& x) {
  std::array<double, 4> out;
  for (int t = 0; t < 4; ++t)
    out[t] = static_cast<double>(x[t].numerator()) / static_cast<double>(x[t].denominator());
  return out;
}

}  // namespace

double q_form(const QuaternionAlgebra& A, const Quat& alpha, const UpperHalfPoint& z) {
  const auto g = conj_sigma(A.iota_inf(to_double(alpha)), z);
  return g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
}

CountTable countLatticePointsTable(const QuaternionAlgebra& A, const TidyLattice& L, const UpperHalfPoint& z,
                                   double delta, const std::vector<i64>& norms, Enumerator how) {
  if (delta < 0) throw std::invalid_argument("countLatticePoints: delta must be nonnegative");
  if (z.y <= 0) throw std::invalid_argument("countLatticePoints: z must lie in the upper half plane");
  CountTable out;
  if (norms.empty()) return out;
  for (i64 m : norms) {
    if (m < 1) throw std::invalid_argument("countLatticePoints: norms must be positive");
    out.by_norm[m] = 0;
  }
  const i64 mmax = *std::max_element(norms.begin(), norms.end());
  const double bound = (4 * delta + 2) * static_cast<double>(mmax);
  const double slack = bound * (1 + 1e-9) + 1e-9;

  // lattice basis in frame coordinates, scaled to integers by D
  std::array<Quat, 4> fb;
  i64 D = 1;
  for (int r = 0; r < 4; ++r) {
    Quat v{0, 0, 0, 0};
    for (int c = 0; c < 4; ++c)
      for (int t = 0; t < 4; ++t) v[t] += Rational(L.basis[r][c]) * L.parent.basis[c][t];
    fb[r] = v;
    for (const auto& q : v) D = std::lcm(D, q.denominator());
  }
  std::array<std::array<i64, 4>, 4> FI;
  std::array<std::array<double, 4>, 4> V;  // conjugated iota images
  for (int r = 0; r < 4; ++r) {
    for (int t = 0; t < 4; ++t) FI[r][t] = (fb[r][t] * D).numerator();
    V[r] = conj_sigma(A.iota_inf(to_double(fb[r])), z);
  }
  double G[4][4];
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      G[r][s] = 0;
      for (int t = 0; t < 4; ++t) G[r][s] += V[r][t] * V[s][t];
    }

  const std::set<i64> wanted(norms.begin(), norms.end());
  const i64 D2 = D * D;
  auto visit = [&](const std::array<i64, 4>& x) {
    ++out.visited;
    std::array<i64, 4> f{0, 0, 0, 0};
    for (int r = 0; r < 4; ++r)
      for (int t = 0; t < 4; ++t) f[t] += x[r] * FI[r][t];
    const i64 n = A.nr_int(f);
    if (n <= 0 || n % D2 != 0) return;
    const i64 m = n / D2;
    if (!wanted.count(m)) return;
    std::array<double, 4> fd;
    for (int t = 0; t < 4; ++t) fd[t] = static_cast<double>(f[t]) / static_cast<double>(D);
    const auto g = A.iota_inf(fd);
    if (hyperbolic_u(z, mobius(g, z)) <= delta + 1e-12) ++out.by_norm[m];
  };

  if (how == Enumerator::FinckePohst) {
    // Q(x) = sum_i q[i][i] (x_i + sum_{j > i} q[i][j] x_j)^2
    double q[4][4];
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) q[r][s] = G[r][s];
    for (int i = 0; i < 4; ++i) {
      if (q[i][i] <= 0) throw std::domain_error("countLatticePoints: degenerate Gram matrix");
      for (int j = i + 1; j < 4; ++j) {
        q[j][i] = q[i][j];
        q[i][j] /= q[i][i];
      }
      for (int k = i + 1; k < 4; ++k)
        for (int l = k; l < 4; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    std::array<i64, 4> x{0, 0, 0, 0};
    std::function<void(int, double)> rec = [&](int i, double remaining) {
      double c = 0;
      for (int j = i + 1; j < 4; ++j) c -= q[i][j] * static_cast<double>(x[j]);
      const double r = std::sqrt(std::max(remaining, 0.0) / q[i][i]);
      const i64 lo = static_cast<i64>(std::ceil(c - r - 1e-9)), hi = static_cast<i64>(std::floor(c + r + 1e-9));
      for (i64 v = lo; v <= hi; ++v) {
        const double d = static_cast<double>(v) - c;
        const double rest = remaining - q[i][i] * d * d;
        if (rest < -1e-9 * slack) continue;
        x[i] = v;
        if (i == 0) {
          visit(x);
        } else {
          rec(i - 1, rest);
        }
      }
      x[i] = 0;
    };
    rec(3, slack);
  } else {
    // axis-aligned box from the diagonal of G^{-1}
    double inv[4][4], m[4][8];
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 8; ++c) m[r][c] = c < 4 ? G[r][c] : (c - 4 == r);
    for (int c = 0; c < 4; ++c) {
      int piv = c;
      for (int r = c + 1; r < 4; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      for (int k = 0; k < 8; ++k) std::swap(m[c][k], m[piv][k]);
      const double d = m[c][c];
      for (int k = 0; k < 8; ++k) m[c][k] /= d;
      for (int r = 0; r < 4; ++r)
        if (r != c) {
          const double f = m[r][c];
          for (int k = 0; k < 8; ++k) m[r][k] -= f * m[c][k];
        }
    }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) inv[r][c] = m[r][c + 4];
    std::array<i64, 4> B;
    for (int r = 0; r < 4; ++r) B[r] = static_cast<i64>(std::floor(std::sqrt(slack * inv[r][r]) + 1e-9));
    std::array<i64, 4> x;
    for (x[0] = -B[0]; x[0] <= B[0]; ++x[0])
      for (x[1] = -B[1]; x[1] <= B[1]; ++x[1])
        for (x[2] = -B[2]; x[2] <= B[2]; ++x[2])
          for (x[3] = -B[3]; x[3] <= B[3]; ++x[3]) {
            double Q = 0;
            for (int r = 0; r < 4; ++r)
              for (int s = 0; s < 4; ++s) Q += G[r][s] * static_cast<double>(x[r]) * static_cast<double>(x[s]);
            if (Q <= slack) visit(x);
          }
  }
  return out;
}

i64 countLatticePoints(const QuaternionAlgebra& A, const TidyLattice& L, const UpperHalfPoint& z, double delta, i64 m,
                       Enumerator how) {
  return countLatticePointsTable(A, L, z, delta, {m}, how).by_norm.at(m);
}

CountingRow countingBoundRow(const QuaternionAlgebra& A, const TidyLattice& Lam, const UpperHalfPoint& z, double delta,
                             i64 L, Enumerator how) {
  if (L < 1) throw std::invalid_argument("countingBoundRow: L must be positive");
  std::vector<i64> norms;
  for (i64 m = 1; m <= L; ++m) {
    norms.push_back(m);
    norms.push_back(m * m);
  }
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  const auto t = countLatticePointsTable(A, Lam, z, delta, norms, how);
  CountingRow row;
  row.N = Lam.N;
  row.L = L;
  for (i64 m = 1; m <= L; ++m) {
    row.sum_linear += t.by_norm.at(m);
    row.sum_square += t.by_norm.at(m * m);
  }
  const double Ld = static_cast<double>(L), Nd = static_cast<double>(Lam.N);
  row.ratio_linear = static_cast<double>(row.sum_linear) / (Ld + Ld * Ld / Nd);
  row.ratio_square = static_cast<double>(row.sum_square) / (Ld + Ld * Ld * Ld / Nd);
  return row;
}

}  // namespace newmc
