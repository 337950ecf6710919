#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "newmc/cyclo.hpp"

using namespace newmc;

namespace {

std::complex<double> zeta(i64 M, i64 e) {
  const double t = 2 * std::numbers::pi * static_cast<double>(floor_mod(e, M)) / static_cast<double>(M);
  return {std::cos(t), std::sin(t)};
}

CycloValue random_value(std::mt19937_64& rng, i64 M, int terms) {
  std::uniform_int_distribution<i64> ed(0, M - 1), cd(-3, 3);
  RootSum s(M);
  for (int t = 0; t < terms; ++t) s.add(ed(rng), cd(rng));
  return CycloValue::from_sum(s);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<i64>{-1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<i64>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<i64>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<i64>{1, -1, 1});
  CHECK(cyclotomic_polynomial(9) == std::vector<i64>{1, 0, 0, 1, 0, 0, 1});
  for (i64 M : {12, 30, 36, 100, 105, 486})
    CHECK(static_cast<i64>(cyclotomic_polynomial(M).size()) - 1 == euler_phi(M));
}

TEST_CASE("roots of unity") {
  for (i64 M : {1, 2, 7, 18, 54, 60, 250}) {
    CHECK(rootOfUnity(M, 0) == CycloValue::integer(M, 1));
    CHECK(rootOfUnity(M, M) == CycloValue::integer(M, 1));
    for (i64 e = 0; e < M; e += 3) {
      CHECK(cycloMul(rootOfUnity(M, e), rootOfUnity(M, M - e)) == CycloValue::integer(M, 1));
      CHECK(std::abs(rootOfUnity(M, e).embed() - zeta(M, e)) < 1e-12);
    }
    CHECK(cycloMul(rootOfUnity(M, 1), rootOfUnity(M, M - 1)) == CycloValue::integer(M, 1));
  }
  CHECK_THROWS_AS(rootOfUnity(10007 * 2, 1), std::length_error);
}

TEST_CASE("orthogonality") {
  for (i64 p : {3, 5, 7}) {
    RootSum s(p);
    for (i64 t = 0; t < p; ++t) s.add(t);
    CHECK(isZero(CycloValue::from_sum(s)));
  }
  // full sum over a nontrivial subgroup coset inside a larger modulus
  RootSum s(36);
  for (i64 t = 0; t < 36; t += 4) s.add(t + 1);
  CHECK(isZero(CycloValue::from_sum(s)));
  RootSum w(36);
  w.add(0);
  w.add(1);
  CHECK_FALSE(isZero(CycloValue::from_sum(w)));
}

TEST_CASE("summation order does not matter") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<i64> ed(0, 179);
  std::vector<i64> es(500);
  for (auto& e : es) e = ed(rng);
  RootSum a(180), b(180);
  for (auto e : es) a.add(e);
  for (auto it = es.rbegin(); it != es.rend(); ++it) b.add(*it);
  CHECK(isZero(CycloValue::from_sum(a) - CycloValue::from_sum(b)));
}

TEST_CASE("embedding is a ring homomorphism") {
  std::mt19937_64 rng(2);
  for (i64 M : {12, 45, 54, 120}) {
    for (int t = 0; t < 250; ++t) {
      const auto a = random_value(rng, M, 8), b = random_value(rng, M, 8);
      CHECK(std::abs((a * b).embed() - a.embed() * b.embed()) < 1e-10 * 64);
      CHECK(std::abs((a + b).embed() - (a.embed() + b.embed())) < 1e-10 * 16);
      CHECK(std::abs(a.conj().embed() - std::conj(a.embed())) < 1e-10 * 16);
    }
  }
}

TEST_CASE("reduction is idempotent and lifting preserves values") {
  std::mt19937_64 rng(4);
  for (i64 M : {18, 20, 63}) {
    const auto a = random_value(rng, M, 30);
    std::vector<BigInt> b(static_cast<std::size_t>(M), BigInt(0));
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) b[j] = a.coeffs()[j];
    const auto again = CycloValue::reduce_buckets(M, b, a.scale());
    CHECK(again.coeffs() == a.coeffs());
    const auto up = a.lift(M * 6);
    CHECK(std::abs(up.embed() - a.embed()) < 1e-9);
    CHECK(up == a.lift(M * 6));
    CHECK((up - a).is_zero());
  }
}

TEST_CASE("rational scales and ratios") {
  const auto x = rootOfUnity(12, 1).scaled(Rational(1, 3));
  const auto y = rootOfUnity(12, 1).scaled(Rational(2, 6));
  CHECK(x == y);
  CHECK(std::abs(x.embed() - zeta(12, 1) / 3.0) < 1e-14);
  CycloRatio r1{rootOfUnity(12, 1), rootOfUnity(12, 2)};
  CycloRatio r2{rootOfUnity(12, 3), rootOfUnity(12, 4)};
  CHECK(exact_equal(r1, r2));
  CHECK(std::abs(r1.value() - zeta(12, -1)) < 1e-14);
  CHECK_THROWS_AS(cycloAdd(rootOfUnity(6, 1), rootOfUnity(12, 1)), std::invalid_argument);
}

TEST_CASE("large moduli stay exact") {
  // phi(5^5 * 4) = 5000
  const i64 M = 12500;
  RootSum s(M);
  for (i64 t = 0; t < 3125; ++t) s.add(4 * t + 1);  // all 3125th roots times zeta_M
  CHECK(isZero(CycloValue::from_sum(s)));
  RootSum u(M);
  u.add(7, 1000000);
  u.add(M - 7, -999999);
  const auto v = CycloValue::from_sum(u);
  CHECK_FALSE(v.is_zero());
  CHECK(std::abs(v.embed() - (1e6 * zeta(M, 7) - 999999.0 * zeta(M, -7))) < 1e-6);
}
