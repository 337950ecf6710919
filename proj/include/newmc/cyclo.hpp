#pragma once

// Exact arithmetic in Z[zeta_M] (optionally scaled by a rational) in the power
// basis 1, zeta, ..., zeta^{phi(M)-1}, plus the complex embedding
// zeta -> exp(2 pi i / M).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <complex>
#include <vector>

#include "newmc/arith.hpp"

namespace newmc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<i64>;

/// Largest phi(M) accepted by the exact backend.
constexpr i64 kCycloBudget = 10'000;

i64 euler_phi(i64 n);
i64 radical(i64 n);

/// Coefficients of the M-th cyclotomic polynomial, lowest degree first.
/// Cached; safe to call concurrently.
const std::vector<i64>& cyclotomic_polynomial(i64 M);

/// Sum of roots of unity with integer multiplicities, indexed by exponent mod M.
class RootSum {
 public:
  RootSum() = default;
  explicit RootSum(i64 M) : M_(M), counts_(static_cast<std::size_t>(M), 0) {}

  i64 modulus() const { return M_; }
  void add(i64 e, i64 c = 1) {
    auto& slot = counts_[static_cast<std::size_t>(floor_mod(e, M_))];
    slot = checked_add(slot, c);
  }
  /// this += c * zeta^shift * other
  void add_shifted(const RootSum& other, i64 shift, i64 c = 1);
  const std::vector<i64>& counts() const { return counts_; }
  i64 term_count() const;
  std::complex<double> embed() const;

 private:
  i64 M_ = 1;
  std::vector<i64> counts_{0};
};

class CycloValue {
 public:
  CycloValue() : CycloValue(1) {}
  explicit CycloValue(i64 M);

  static CycloValue from_sum(const RootSum& s);
  static CycloValue integer(i64 M, i64 c);

  i64 modulus() const { return M_; }
  /// Power-basis coefficients, length phi(M).
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  const Rational& scale() const { return scale_; }

  bool is_zero() const;
  CycloValue scaled(const Rational& r) const;
  /// Same value in Z[zeta_{M2}] for a multiple M2 of M.
  CycloValue lift(i64 M2) const;
  /// Complex conjugate (zeta -> zeta^{-1}).
  CycloValue conj() const;
  std::complex<double> embed() const;

  CycloValue operator+(const CycloValue& o) const;
  CycloValue operator-(const CycloValue& o) const;
  CycloValue operator*(const CycloValue& o) const;
  CycloValue operator-() const;
  bool operator==(const CycloValue& o) const { return (*this - o).is_zero(); }

  /// Builds the reduced value from exponent buckets (any length-M vector).
  static CycloValue reduce_buckets(i64 M, std::vector<BigInt> buckets, Rational scale);

 private:
  i64 M_;
  std::vector<BigInt> coeffs_;
  Rational scale_{1};
};

CycloValue cycloAdd(const CycloValue& a, const CycloValue& b);
CycloValue cycloMul(const CycloValue& a, const CycloValue& b);
/// zeta_M^e; throws std::length_error when phi(M) exceeds the budget.
CycloValue rootOfUnity(i64 M, i64 e);
bool isZero(const CycloValue& a);

/// Quotient num / den evaluated through the complex embedding, with exact
/// vanishing decided on num alone.
struct CycloRatio {
  CycloValue num;
  CycloValue den;

  bool is_zero() const { return num.is_zero(); }
  std::complex<double> value() const { return num.embed() / den.embed(); }
};

/// num1/den1 == num2/den2 exactly (cross-multiplied in a common modulus).
bool exact_equal(const CycloRatio& x, const CycloRatio& y);

}  // namespace newmc
