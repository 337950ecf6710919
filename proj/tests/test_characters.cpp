#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "newmc/characters.hpp"

using namespace newmc;

namespace {

std::complex<double> e2pi(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

std::vector<MultChar> primitive_chars(i64 p, int a) {
  std::vector<MultChar> out;
  for (i64 c = 0; c < phi_prime_power(p, a); ++c) {
    MultChar chi(p, a, c);
    if (chi.conductor() == a) out.push_back(chi);
  }
  return out;
}

struct ThetaCase {
  i64 p;
  ExtKind kind;
  int level;
};

std::vector<ThetaCase> theta_cases() {
  return {{3, ExtKind::Unramified, 2}, {3, ExtKind::Unramified, 3}, {3, ExtKind::Unramified, 4},
          {5, ExtKind::Unramified, 2}, {5, ExtKind::Unramified, 3}, {3, ExtKind::Ramified, 2},
          {3, ExtKind::Ramified, 4},   {5, ExtKind::Ramified, 2},   {5, ExtKind::Ramified, 4},
          {7, ExtKind::Ramified, 4}};
}

// the shell element varpi_E^c w as an element of E
QuadExtElement shell_element(const ThetaChar& th, const ExtResidue& w, const ContextPtr& ctx) {
  const int k = th.level();
  auto lift = [&](i64 x, int s) { return PAdicScalar::from_integer(ctx, x).shift(s); };
  if (th.ext().kind() == ExtKind::Unramified) return {lift(w.a, -k), lift(w.b, -k)};
  const int j = k / 2;
  return {lift(w.b, -j), lift(w.a, -j - 1)};
}

}  // namespace

TEST_CASE("additive character basics") {
  auto ctx = make_context(5, 8);
  AdditiveChar psi(5);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<i64> d(1, 5 * 5 * 5 * 5 - 1);
  for (int t = 0; t < 2000; ++t) {
    const auto x = PAdicScalar::from_rational(ctx, d(rng), 625);
    const auto y = PAdicScalar::from_rational(ctx, d(rng), 125);
    CHECK(std::abs(psi.value(x) * psi.value(-x) - 1.0) < 1e-12);
    CHECK(floor_mod(psi.exponent(x + y, 625) - psi.exponent(x, 625) - psi.exponent(y, 625), 625) == 0);
  }
  CHECK(psi.value(PAdicScalar::from_integer(ctx, 17)) == std::complex<double>(1.0));
  CHECK(std::abs(psi.value(PAdicScalar::from_rational(ctx, 1, 5)) - 1.0) > 0.5);
}

TEST_CASE("psi_E is psi of the trace") {
  auto ctx = make_context(3, 8);
  AdditiveChar psi(3);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> d(0, 6560);
  for (auto kind : {ExtKind::Unramified, ExtKind::Ramified}) {
    QuadExtContext E(ctx, kind);
    for (int t = 0; t < 10000; ++t) {
      const QuadExtElement u{PAdicScalar::from_rational(ctx, d(rng), 81), PAdicScalar::from_rational(ctx, d(rng), 27)};
      const double a = static_cast<double>(u.a.fractional_part().first) / std::pow(3.0, u.a.fractional_part().second);
      CHECK(std::abs(psi.value_E(u) - e2pi(2 * a)) < 1e-9);
    }
  }
}

TEST_CASE("multiplicative character conductor and values") {
  for (i64 p : {3, 5, 7}) {
    for (int a = 1; a <= 4; ++a) {
      if (ipow(p, a) > 3000) continue;
      const i64 pa = ipow(p, a);
      for (i64 c = 0; c < phi_prime_power(p, a); ++c) {
        MultChar chi(p, a, c);
        // conductor from scratch: smallest j with chi trivial on 1 + p^j
        int j = a;
        while (j > 0) {
          bool trivial = true;
          const i64 pj = ipow(p, j - 1);
          for (i64 u = 1; u < pa && trivial; ++u)
            if (u % p != 0 && (j - 1 == 0 || (u - 1) % pj == 0) && chi.exponent(u, chi.order()) != 0) trivial = false;
          if (!trivial) break;
          --j;
        }
        CHECK(chi.conductor() == j);
        for (i64 u = 1; u < pa; u += 7)
          if (u % p != 0) CHECK(std::abs(std::abs(chi.value(u)) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("orthogonality of nontrivial characters") {
  for (i64 p : {3, 5}) {
    for (int a = 1; a <= 3; ++a) {
      const i64 pa = ipow(p, a);
      for (i64 c = 1; c < phi_prime_power(p, a); ++c) {
        MultChar chi(p, a, c);
        RootSum s(chi.order());
        for (i64 u = 1; u < pa; ++u)
          if (u % p != 0) s.add(chi.exponent(u, chi.order()));
        CHECK(isZero(CycloValue::from_sum(s)));
      }
    }
  }
}

TEST_CASE("alphaOfChi linearizes chi exhaustively") {
  AdditiveChar psi(3);
  i64 checked = 0;
  for (i64 p : {3, 5, 7}) {
    AdditiveChar ps(p);
    for (int a = 2; a <= 4; ++a) {
      if (ipow(p, a) > 3000) continue;
      auto ctx = make_context(p, a + 4);
      const int lo = ceil_div(a, 2);
      for (const auto& chi : primitive_chars(p, a)) {
        const auto alpha = alphaOfChi(chi, ctx);
        REQUIRE(alpha.valuation() == -a);
        for (i64 t = 0; t < ipow(p, a - lo); ++t) {
          const i64 dx = t * ipow(p, lo);
          const auto phase = ps.value(alpha * PAdicScalar::from_integer(ctx, dx));
          CHECK(std::abs(chi.value(1 + dx) - phase) < 1e-9);
          ++checked;
        }
        const auto beta = alphaOfChi(chi.inverse(), ctx);
        const i64 ph = ipow(p, a / 2);
        CHECK(floor_mod(alpha.unit() + beta.unit(), ph) == 0);
      }
    }
  }
  CHECK(checked > 1000);
  auto ctx = make_context(3, 6);
  CHECK_THROWS_WITH_AS(alphaOfChi(MultChar(3, 1, 1), ctx), "lemma inapplicable", std::invalid_argument);
}

TEST_CASE("principal series Gauss sums") {
  for (i64 p : {3, 5}) {
    for (int n0 = 2; n0 <= 3; ++n0) {
      const i64 pn = ipow(p, n0);
      for (const auto& mu : primitive_chars(p, n0)) {
        const auto C0 = gaussC0PrincipalSeries(mu);
        // independent float summation
        std::complex<double> s = 0;
        for (i64 u = 1; u < pn; ++u)
          if (u % p != 0) s += mu.value(u) * e2pi(-static_cast<double>(u) / static_cast<double>(pn));
        s /= static_cast<double>(pn);
        CHECK(std::abs(C0.embed() - s) < 1e-12);
        CHECK(std::abs(std::abs(C0.embed()) - std::pow(static_cast<double>(p), -n0 / 2.0)) < 1e-12);
        CHECK_FALSE(C0.is_zero());
        // mu^{-1}: C0 -> mu(-1) conj(C0)
        const auto Cinv = gaussC0PrincipalSeries(mu.inverse());
        const i64 sign = mu.exponent(pn - 1, mu.order()) == 0 ? 1 : -1;
        CHECK(Cinv == C0.conj().scaled(Rational(sign)));
      }
      // imprimitive characters sum to zero
      for (i64 c = 0; c < phi_prime_power(p, n0); ++c) {
        MultChar mu(p, n0, c);
        if (mu.conductor() == n0) continue;
        CHECK(gaussC0PrincipalSeries(mu, n0).is_zero());
      }
    }
  }
}

TEST_CASE("buildTheta produces valid characters") {
  std::mt19937_64 rng(17);
  for (const auto& tc : theta_cases()) {
    CAPTURE(tc.p);
    CAPTURE(tc.level);
    auto ctx = make_context(tc.p, tc.level + 4);
    QuadExtContext E(ctx, tc.kind);
    const auto th = buildTheta(E, tc.level);
    const auto& R = th.ring();
    CHECK(th.conductor() == tc.level);
    // trivial on F-units and on varpi
    const i64 ma = ipow(tc.p, E.a_exp(tc.level));
    for (i64 u = 1; u < ma; ++u)
      if (u % tc.p != 0) CHECK(th.unit_exponent(R.reduce(u, 0)) == 0);
    CHECK(floor_mod(2 * th.pi_exponent(), th.value_order()) == 0);
    if (tc.kind == ExtKind::Unramified) CHECK(th.pi_exponent() == 0);
    // multiplicativity on random pairs
    const auto reps = unitShellReps(E, tc.level);
    std::uniform_int_distribution<std::size_t> d(0, reps.size() - 1);
    for (int t = 0; t < 10000; ++t) {
      const auto x = reps[d(rng)], y = reps[d(rng)];
      CHECK(floor_mod(th.unit_exponent(R.mul(x, y)) - th.unit_exponent(x) - th.unit_exponent(y), th.value_order()) == 0);
    }
  }
  auto ctx = make_context(3, 8);
  CHECK_THROWS_AS(buildTheta(QuadExtContext(ctx, ExtKind::Ramified), 3), std::invalid_argument);
  CHECK_THROWS_AS(buildTheta(QuadExtContext(ctx, ExtKind::Unramified), 1), std::invalid_argument);
}

TEST_CASE("alphaOfTheta linearizes theta exhaustively") {
  i64 checked = 0;
  for (const auto& tc : theta_cases()) {
    CAPTURE(tc.p);
    CAPTURE(tc.level);
    auto ctx = make_context(tc.p, tc.level + 6);
    QuadExtContext E(ctx, tc.kind);
    AdditiveChar psi(tc.p);
    for (int sign : {1, -1}) {
      if (sign == -1 && tc.kind == ExtKind::Unramified) continue;
      const auto th = buildTheta(E, tc.level, {0, sign});
      const auto alpha = alphaOfTheta(th, ctx);
      CHECK(alpha.a.is_zero());
      CHECK(extValuation(E, alpha) == -tc.level - E.e() + 1);
      const int lo = ceil_div(tc.level, 2);
      const i64 sa = ipow(tc.p, E.a_exp(lo)), sb = ipow(tc.p, E.b_exp(lo));
      const auto& R = th.ring();
      for (i64 da = 0; da < R.mod_a(); da += sa)
        for (i64 db = 0; db < R.mod_b(); db += sb) {
          const QuadExtElement du{PAdicScalar::from_integer(ctx, da), PAdicScalar::from_integer(ctx, db)};
          const auto lhs = th.value(0, R.reduce(1 + da, db));
          const auto rhs = psi.value_E(ext_mul(E, alpha, du));
          CHECK(std::abs(lhs - rhs) < 1e-9);
          ++checked;
        }
      // conjugate character has the negated alpha
      const auto beta = alphaOfTheta(th.conjugate(), ctx);
      const auto s = alpha.b + beta.b;
      const int dep = tc.kind == ExtKind::Ramified ? tc.level / 2 - E.b_exp(lo) : tc.level - E.b_exp(lo);
      CHECK((s.is_zero() || s.valuation() >= alpha.b.valuation() + dep));
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("supercuspidal Gauss sums") {
  for (const auto& tc : theta_cases()) {
    CAPTURE(tc.p);
    CAPTURE(tc.level);
    auto ctx = make_context(tc.p, tc.level + 6);
    QuadExtContext E(ctx, tc.kind);
    const auto th = buildTheta(E, tc.level);
    const int n = tc.kind == ExtKind::Unramified ? 2 * tc.level : tc.level + 1;
    const double q = static_cast<double>(tc.p);
    const auto C0 = gaussC0Supercuspidal(th);
    // independent float summation over the shell
    AdditiveChar psi(tc.p);
    const int c = shell_exponent(th);
    std::complex<double> s = 0;
    const auto reps = unitShellReps(E, tc.level);
    for (const auto& w : reps) {
      const auto u = shell_element(th, w, ctx);
      s += std::conj(th.value(c, w)) * psi.value_E(u);
      // shell norm valuation, exhaustively
      CHECK(extNorm(E, u).valuation() == -n);
      CHECK(extValuation(E, u) == c);
    }
    s /= static_cast<double>(th.ring().size());
    CHECK(std::abs(C0.embed() - s) < 1e-9);
    const double scaled = std::abs(C0.embed()) * std::pow(q, n / 2.0);
    MESSAGE("p=" << tc.p << " level=" << tc.level << " |C0| q^{n/2} = " << scaled);
    // a primitive Gauss sum over o_E / p_E^k has modulus |o_E / p_E^k|^{1/2}
    const double expected = tc.kind == ExtKind::Unramified ? 1.0 : std::sqrt(q);
    CHECK(std::abs(scaled - expected) < 1e-12);
    CHECK(scaled >= std::pow(q, -0.5) - 1e-12);
    CHECK(scaled <= std::pow(q, 0.5) + 1e-12);
    if (tc.kind == ExtKind::Ramified) {
      // theta(varpi_E)^c with c odd: the flipped sign negates C0
      const auto C1 = gaussC0Supercuspidal(th.with_flipped_pi_sign());
      CHECK(C1 == -C0);
      CHECK(std::abs(std::abs(C1.embed()) - std::abs(C0.embed())) < 1e-12);
    }
  }
}
