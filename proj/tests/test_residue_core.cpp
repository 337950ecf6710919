#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "newmc/padic.hpp"
#include "newmc/quad_ext.hpp"

using namespace newmc;

namespace {

int count_factor(i64 x, i64 p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

PAdicScalar random_scalar(std::mt19937_64& rng, const ContextPtr& ctx, int vlo, int vhi) {
  std::uniform_int_distribution<int> vd(vlo, vhi);
  std::uniform_int_distribution<i64> ud(1, ctx->pK() - 1);
  i64 u;
  do u = ud(rng);
  while (u % ctx->p() == 0);
  return PAdicScalar::make(ctx, vd(rng), u);
}

}  // namespace

TEST_CASE("valuation examples") {
  auto ctx = make_context(3, 8);
  CHECK(valuation(PAdicScalar::from_integer(ctx, 1)) == 0);
  CHECK(valuation(PAdicScalar::from_integer(ctx, 54)) == 3);
  CHECK_THROWS_WITH_AS(valuation(PAdicScalar::zero(ctx)), "infinite valuation", std::domain_error);
}

TEST_CASE("valuation is additive on products of integers") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> d(1, 200000);
  for (i64 p : {3, 5, 7}) {
    auto ctx = make_context(p, 10);
    for (int t = 0; t < 100; ++t) {
      const i64 x = d(rng), y = d(rng);
      const auto X = PAdicScalar::from_integer(ctx, x), Y = PAdicScalar::from_integer(ctx, y);
      CHECK(valuation(X * Y) == count_factor(x * y, p));
      CHECK(valuation(X) + valuation(Y) == valuation(X * Y));
    }
  }
}

TEST_CASE("context invariants") {
  CHECK_THROWS_AS(make_context(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_context(9, 4), std::invalid_argument);
  for (auto [p, K] : {std::pair<i64, int>{3, 6}, {5, 4}, {7, 3}}) {
    auto ctx = make_context(p, K);
    const auto& L = ctx->logs();
    CHECK(L.order() == phi_prime_power(p, K));
    i64 x = 1;
    for (i64 t = 1; t < L.order(); ++t) {
      x = mulmod(x, ctx->generator(), ctx->pK());
      CHECK(x != 1);
    }
    std::set<i64> seen;
    for (i64 u = 1; u < ctx->pK(); ++u) {
      if (u % p == 0) continue;
      const i64 t = L.log(u);
      CHECK(powmod(ctx->generator(), t, ctx->pK()) == u);
      seen.insert(t);
    }
    CHECK(static_cast<i64>(seen.size()) == L.order());
  }
}

TEST_CASE("ring axioms at working precision") {
  std::mt19937_64 rng(5);
  auto ctx = make_context(5, 7);
  for (int t = 0; t < 300; ++t) {
    const auto x = random_scalar(rng, ctx, -2, 3), y = random_scalar(rng, ctx, -2, 3), z = random_scalar(rng, ctx, 0, 1);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    // addition is associative modulo p^{min v + K}, the absolute precision of the inputs
    const auto d = ((x + y) + z) - (x + (y + z));
    const int vmin = std::min({x.valuation(), y.valuation(), z.valuation()});
    CHECK((d.is_zero() || d.valuation() >= vmin + ctx->K()));
    // distributivity holds up to the capped relative precision; compare at a
    // valuation level where no digits were lost
    const auto lhs = x * (y + z), rhs = x * y + x * z;
    if (!lhs.is_zero() && !rhs.is_zero()) {
      const int v = lhs.valuation();
      CHECK(rhs.valuation() == v);
      CHECK(lhs.unit_mod(3) == rhs.unit_mod(3));
    }
    CHECK((x - x).is_zero());
    CHECK(x * x.inverse() == PAdicScalar::from_integer(ctx, 1));
  }
}

TEST_CASE("mixed precision is refused") {
  auto a = PAdicScalar::from_integer(make_context(3, 4), 2);
  auto b = PAdicScalar::from_integer(make_context(3, 5), 2);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("strict triangle inequality") {
  std::mt19937_64 rng(8);
  auto ctx = make_context(3, 8);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_scalar(rng, ctx, -3, 3), y = random_scalar(rng, ctx, -3, 3);
    const auto s = x + y;
    if (x.valuation() != y.valuation()) CHECK(s.valuation() == std::min(x.valuation(), y.valuation()));
    else if (!s.is_zero()) CHECK(s.valuation() >= x.valuation());
  }
}

TEST_CASE("extension norm and valuation") {
  std::mt19937_64 rng(3);
  for (auto kind : {ExtKind::Unramified, ExtKind::Ramified}) {
    for (i64 p : {3, 5}) {
      auto ctx = make_context(p, 8);
      QuadExtContext E(ctx, kind);
      CHECK(E.D_int() == (kind == ExtKind::Ramified ? p : (p == 3 ? 2 : 2)));
      const auto one = PAdicScalar::from_integer(ctx, 1), zero = PAdicScalar::zero(ctx);
      CHECK(extNorm(E, {one, zero}) == one);
      CHECK(extNorm(E, {zero, one}) == -E.D());
      if (kind == ExtKind::Ramified) CHECK(extValuation(E, {zero, one}) == 1);
      else CHECK(extValuation(E, {PAdicScalar::from_integer(ctx, p), zero}) == 1);
      for (int t = 0; t < 200; ++t) {
        QuadExtElement x{random_scalar(rng, ctx, 0, 2), random_scalar(rng, ctx, 0, 2)};
        QuadExtElement y{random_scalar(rng, ctx, 0, 2), random_scalar(rng, ctx, 0, 2)};
        const auto xy = ext_mul(E, x, y);
        const auto nxy = extNorm(E, xy), prod = extNorm(E, x) * extNorm(E, y);
        CHECK(nxy.valuation() == prod.valuation());
        CHECK(nxy.unit_mod(4) == prod.unit_mod(4));
        CHECK(extValuation(E, x) + extValuation(E, y) == extValuation(E, xy));
        // v(N x) = f v_E(x)
        CHECK(extValuation(E, x) * (kind == ExtKind::Ramified ? 1 : 2) == extNorm(E, x).valuation());
        const auto cc = ext_conj(ext_conj(x));
        CHECK(cc.a == x.a);
        CHECK(cc.b == x.b);
      }
    }
  }
}

TEST_CASE("norm oracle by direct expansion of integer residues") {
  auto ctx = make_context(3, 6);
  QuadExtContext E(ctx, ExtKind::Unramified);
  for (i64 a = 1; a < 30; a += 4)
    for (i64 b = 1; b < 30; b += 5) {
      if (a % 3 == 0) continue;
      QuadExtElement x{PAdicScalar::from_integer(ctx, a), PAdicScalar::from_integer(ctx, b)};
      const i64 direct = a * a - E.D_int() * b * b;
      CHECK(extNorm(E, x) == PAdicScalar::from_integer(ctx, direct));
    }
}

TEST_CASE("unit shell representatives") {
  auto ctx = make_context(3, 6);
  QuadExtContext U(ctx, ExtKind::Unramified), R(ctx, ExtKind::Ramified);
  CHECK(unitShellReps(U, 1).size() == 8);
  CHECK(unitShellReps(R, 2).size() == 6);
  const auto reps = unitShellReps(U, 3);
  CHECK(reps.size() == 648);
  // pairwise non-congruent: distinct residues modulo p_E^3, all units
  ExtResidueRing ring(U, 3);
  std::set<i64> idx;
  for (auto r : reps) {
    CHECK(ring.is_unit(r));
    idx.insert(ring.index(r));
  }
  CHECK(idx.size() == reps.size());
  // exhaustive: every unit residue is congruent to exactly one representative
  i64 units = 0;
  for (i64 a = 0; a < 27; ++a)
    for (i64 b = 0; b < 27; ++b)
      if (a % 3 != 0 || b % 3 != 0) ++units;
  CHECK(units == 648);
  for (i64 p : {3, 5})
    for (int k = 1; k <= 3; ++k) {
      auto c = make_context(p, 6);
      QuadExtContext Eu(c, ExtKind::Unramified), Er(c, ExtKind::Ramified);
      CHECK(static_cast<i64>(unitShellReps(Eu, k).size()) == ipow(p, 2 * k) - ipow(p, 2 * (k - 1)));
      CHECK(static_cast<i64>(unitShellReps(Er, k).size()) == ipow(p, k) - ipow(p, k - 1));
    }
}

TEST_CASE("residue ring multiplication and inverses") {
  for (auto kind : {ExtKind::Unramified, ExtKind::Ramified}) {
    auto ctx = make_context(5, 6);
    QuadExtContext E(ctx, kind);
    ExtResidueRing ring(E, 4);
    const auto reps = unitShellReps(E, 4);
    for (std::size_t t = 0; t < reps.size(); t += 7) {
      const auto x = reps[t];
      const auto y = ring.inverse(x);
      CHECK(ring.mul(x, y) == ExtResidue{1, 0});
      CHECK(ring.pow(x, ring.unit_count()) == ExtResidue{1, 0});
    }
  }
}

TEST_CASE("residue field of the unramified extension is F_{q^2}") {
  auto ctx = make_context(3, 4);
  QuadExtContext E(ctx, ExtKind::Unramified);
  ExtResidueRing ring(E, 1);
  // some element has multiplicative order q^2 - 1 = 8
  bool cyclic = false;
  for (auto x : unitShellReps(E, 1)) {
    int ord = 1;
    auto y = x;
    while (!(y == ExtResidue{1, 0})) {
      y = ring.mul(y, x);
      ++ord;
    }
    if (ord == 8) cyclic = true;
  }
  CHECK(cyclic);
}
