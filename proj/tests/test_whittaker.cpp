#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "newmc/whittaker.hpp"

using namespace newmc;

namespace {

std::complex<double> e2pi(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

PAdicScalar unit(const ReprSpec& s, i64 u, int v = 0) { return PAdicScalar::make(s.context(), v, u); }

// the literal principal-series formula, summed backwards in floating point
std::complex<double> ps_oracle(const ReprSpec& s, int i, i64 x) {
  const auto& mu = s.mu();
  const int a = s.n0();
  const i64 pa = ipow(s.p(), a);
  auto term = [&](i64 u) {
    std::complex<double> t = mu.value(x * u % pa) * e2pi(-static_cast<double>(x * u % pa) / static_cast<double>(pa));
    if (i - a < a) t *= mu.value(1 + u * ipow(s.p(), i - a));
    return t;
  };
  std::complex<double> num = 0, den = 0;
  for (i64 u = pa - 1; u > 0; --u) {
    if (u % s.p() == 0) continue;
    num += term(u);
    den += mu.value(u) * e2pi(-static_cast<double>(u) / static_cast<double>(pa));
  }
  return num / den;
}

// shell integral built from field arithmetic: theta^{-1}(u) psi(-x^{-1} varpi^i N(u)) psi_E(u)
std::complex<double> sc_oracle(const ReprSpec& s, int i, i64 x) {
  const auto& th = s.theta();
  const auto& E = th.ext();
  const auto ctx = E.base();
  AdditiveChar psi(s.p());
  const int k = th.level(), c = shell_exponent(th);
  const auto reps = unitShellReps(E, k);
  const auto xinv = PAdicScalar::from_integer(ctx, x).inverse();
  const auto pi = PAdicScalar::make(ctx, i, 1);
  std::complex<double> num = 0, den = 0;
  for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
    const auto& w = *it;
    QuadExtElement u;
    if (E.kind() == ExtKind::Unramified) {
      u = {PAdicScalar::from_integer(ctx, w.a).shift(-k), PAdicScalar::from_integer(ctx, w.b).shift(-k)};
    } else {
      u = {PAdicScalar::from_integer(ctx, w.b).shift(-k / 2), PAdicScalar::from_integer(ctx, w.a).shift(-k / 2 - 1)};
    }
    const auto base = std::conj(th.value(c, w)) * psi.value_E(u);
    den += base;
    num += base * psi.value(-(xinv * pi * extNorm(E, u)));
  }
  return num / den;
}

}  // namespace

TEST_CASE("spec construction") {
  const auto ps = makeSpec(3, 6, Family::PrincipalSeries);
  CHECK(ps.n() == 6);
  CHECK(ps.n0() == 3);
  CHECK(ps.n1() == 3);
  CHECK(ps.mu().conductor() == 3);
  const auto su = makeSpec(3, 6, Family::SupercuspidalUnramified);
  CHECK(su.theta().level() == 3);
  const auto sr = makeSpec(3, 5, Family::SupercuspidalRamified);
  CHECK(sr.theta().level() == 4);
  CHECK(sr.n0() == 2);
  CHECK(sr.n1() == 3);
  CHECK_THROWS_AS(makeSpec(3, 5, Family::PrincipalSeries), std::invalid_argument);
  CHECK_THROWS_AS(makeSpec(3, 6, Family::SupercuspidalRamified), std::invalid_argument);
  CHECK(parse_family(family_name(Family::SupercuspidalRamified)) == Family::SupercuspidalRamified);
}

TEST_CASE("principal series: support and normalization") {
  for (auto [p, n] : {std::pair<i64, int>{3, 4}, {3, 6}, {5, 4}, {5, 6}}) {
    const auto s = makeSpec(p, n, Family::PrincipalSeries);
    for (int i = s.n0() + 1; i <= n; ++i) {
      CHECK(whittakerPS(s, i, unit(s, 2, 1)).is_zero());
      CHECK(whittakerPS(s, i, unit(s, 1, -1)).is_zero());
    }
    const auto w = whittakerPS(s, n, unit(s, 1));
    CHECK((w.num - w.den).is_zero());
    CHECK_THROWS_AS(whittakerPS(s, s.n0(), unit(s, 1)), std::out_of_range);
  }
}

TEST_CASE("principal series p=3 n=4 i=3 on all unit residues") {
  const auto s = makeSpec(3, 4, Family::PrincipalSeries);
  int count = 0;
  for (i64 x = 1; x < 81; ++x) {
    if (x % 3 == 0) continue;
    ++count;
    const auto w = whittakerPS(s, 3, unit(s, x));
    CHECK(std::abs(w.value() - ps_oracle(s, 3, x)) < 1e-9);
  }
  CHECK(count == 54);
}

TEST_CASE("principal series values against the oracle") {
  for (auto [p, n] : {std::pair<i64, int>{3, 6}, {5, 6}, {3, 8}}) {
    const auto s = makeSpec(p, n, Family::PrincipalSeries, 1);
    for (int i = s.n0() + 1; i <= n; ++i)
      for (i64 x : {1, 2, 7, 11, 13, 242}) {
        if (x % p == 0) continue;
        CHECK(std::abs(whittakerPS(s, i, unit(s, x)).value() - ps_oracle(s, i, x)) < 1e-9);
      }
  }
}

TEST_CASE("principal series: invariance under 1 + p^n0") {
  const auto s = makeSpec(5, 6, Family::PrincipalSeries);
  const i64 pn = ipow(5, 3);
  for (int i = 4; i <= 6; ++i)
    for (i64 x : {1, 2, 3, 17}) {
      const auto w1 = whittakerPS(s, i, unit(s, x));
      const auto w2 = whittakerPS(s, i, unit(s, x * (1 + 4 * pn)));
      CHECK(exact_equal(w1, w2));
    }
}

TEST_CASE("supercuspidal: support, normalization and oracle") {
  struct Case {
    i64 p;
    int n;
    Family f;
  };
  for (const auto& c : {Case{3, 4, Family::SupercuspidalUnramified}, Case{3, 6, Family::SupercuspidalUnramified},
                        Case{5, 4, Family::SupercuspidalUnramified}, Case{3, 5, Family::SupercuspidalRamified},
                        Case{5, 5, Family::SupercuspidalRamified}, Case{3, 7, Family::SupercuspidalRamified}}) {
    CAPTURE(c.p);
    CAPTURE(c.n);
    const auto s = makeSpec(c.p, c.n, c.f);
    const auto w = whittakerSC(s, c.n, unit(s, 1));
    CHECK((w.num - w.den).is_zero());
    for (int i = s.n0() + 1; i <= c.n; ++i) {
      CHECK(whittakerSC(s, i, unit(s, 1, -1)).is_zero());
      CHECK(whittakerSC(s, i, unit(s, 2, 1)).is_zero());
      for (i64 x : {1, 2, 4, 7}) {
        if (x % c.p == 0) continue;
        CHECK(std::abs(whittakerSC(s, i, unit(s, x)).value() - sc_oracle(s, i, x)) < 1e-9);
      }
    }
  }
}

TEST_CASE("supercuspidal p=3 ramified n=5 i=4 x=1") {
  const auto s = makeSpec(3, 5, Family::SupercuspidalRamified);
  CHECK(std::abs(whittakerSC(s, 4, unit(s, 1)).value() - sc_oracle(s, 4, 1)) < 1e-9);
}

TEST_CASE("supercuspidal: independence of the theta(varpi_E) sign") {
  for (auto [p, n] : {std::pair<i64, int>{3, 5}, {5, 5}, {3, 7}}) {
    const auto s = makeSpec(p, n, Family::SupercuspidalRamified);
    const auto t = ReprSpec::supercuspidal(s.theta().with_flipped_pi_sign());
    for (int i = s.n0() + 1; i <= n; ++i)
      for (i64 x : {1, 2, 4, 8}) {
        if (x % p == 0) continue;
        CHECK(exact_equal(whittakerSC(s, i, unit(s, x)), whittakerSC(t, i, unit(t, x))));
      }
  }
}

TEST_CASE("supercuspidal: refined shell transversal gives the same values") {
  for (auto [p, n, f] : {std::tuple<i64, int, Family>{3, 4, Family::SupercuspidalUnramified},
                         {3, 6, Family::SupercuspidalUnramified},
                         {3, 5, Family::SupercuspidalRamified},
                         {5, 5, Family::SupercuspidalRamified}}) {
    const auto s = makeSpec(p, n, f);
    const int k = s.theta().level();
    for (int i = s.n0() + 1; i <= n; ++i)
      for (i64 x : {1, 2, 4}) {
        if (x % p == 0) continue;
        const auto x0 = unit(s, x);
        CHECK(std::abs(whittaker_value(s, i, x0) - whittaker_value(s, i, x0, k + 1)) < 1e-10);
      }
  }
}

TEST_CASE("doubling the working precision changes nothing") {
  for (auto f : {Family::PrincipalSeries, Family::SupercuspidalUnramified}) {
    const auto s = makeSpec(3, 6, f);
    auto c1 = make_context(3, 6), c2 = make_context(3, 12);
    for (int i = 4; i <= 6; ++i)
      for (i64 x : {1, 2, 5, 7, 10}) {
        const auto w1 = whittaker(s, i, PAdicScalar::make(c1, 0, x));
        const auto w2 = whittaker(s, i, PAdicScalar::make(c2, 0, x));
        CHECK(exact_equal(w1, w2));
      }
  }
}
