#pragma once

// Truncated arithmetic in Q_p.  A PAdicScalar is p^val * unit with the unit
// known modulo p^K, where K is fixed by the owning PAdicContext.  The
// uniformizer is p.

#include <memory>
#include <string>
#include <vector>

#include "newmc/arith.hpp"

namespace newmc {

/// Discrete logarithms on (Z/p^e Z)^x by a full table.
class DiscreteLog {
 public:
  static constexpr i64 kTableLimit = 10'000'000;

  DiscreteLog(i64 p, int e);

  i64 p() const { return p_; }
  int exponent() const { return e_; }
  i64 modulus() const { return mod_; }
  i64 order() const { return order_; }
  i64 generator() const { return gen_; }

  /// log of a unit residue (any integer representative).
  i64 log(i64 u) const;
  i64 exp(i64 t) const { return powmod(gen_, floor_mod(t, order_), mod_); }

 private:
  i64 p_;
  int e_;
  i64 mod_;
  i64 order_;
  i64 gen_;
  std::vector<std::int32_t> table_;
};

/// Smallest primitive root modulo p^e (p odd, e >= 1).
i64 primitive_root_prime_power(i64 p, int e);

class PAdicContext {
 public:
  PAdicContext(i64 p, int K);

  i64 p() const { return p_; }
  int K() const { return K_; }
  i64 pK() const { return pK_; }
  i64 generator() const { return gen_; }
  /// Table-backed discrete log mod p^K; throws when p^K exceeds the table budget.
  const DiscreteLog& logs() const;
  i64 pow(int e) const;  // p^e for 0 <= e <= K

 private:
  i64 p_;
  int K_;
  i64 pK_;
  i64 gen_;
  mutable std::shared_ptr<const DiscreteLog> logs_;
  std::vector<i64> powers_;
};

using ContextPtr = std::shared_ptr<const PAdicContext>;
ContextPtr make_context(i64 p, int K);

class PAdicScalar {
 public:
  PAdicScalar() = default;  // unbound zero

  static PAdicScalar zero(ContextPtr ctx);
  /// p^val * unit; unit must be coprime to p.
  static PAdicScalar make(ContextPtr ctx, int val, i64 unit);
  static PAdicScalar from_integer(ContextPtr ctx, i64 x);
  /// num / den with den nonzero.
  static PAdicScalar from_rational(ContextPtr ctx, i64 num, i64 den);

  const ContextPtr& context() const { return ctx_; }
  bool is_zero() const { return zero_; }
  /// Throws std::domain_error("infinite valuation") for zero.
  int valuation() const;
  /// Unit part as a residue mod p^K.
  i64 unit() const;
  i64 unit_mod(int e) const;
  /// Value mod p^e for an integral element (val >= 0).
  i64 residue_mod(int e) const;
  /// Numerator r of the fractional part r / p^t with t = max(0, -val);
  /// the returned pair is (r mod p^t, t).
  std::pair<i64, int> fractional_part() const;

  PAdicScalar operator-() const;
  PAdicScalar operator+(const PAdicScalar& o) const;
  PAdicScalar operator-(const PAdicScalar& o) const;
  PAdicScalar operator*(const PAdicScalar& o) const;
  PAdicScalar operator/(const PAdicScalar& o) const;
  PAdicScalar inverse() const;
  /// Multiply by p^e.
  PAdicScalar shift(int e) const;

  /// Equality at working precision.
  bool operator==(const PAdicScalar& o) const;
  bool operator!=(const PAdicScalar& o) const { return !(*this == o); }

  /// Rational approximation-free lift: the value as a double (for diagnostics).
  double to_double() const;
  std::string to_string() const;

 private:
  void check_same(const PAdicScalar& o) const;

  ContextPtr ctx_;
  bool zero_ = true;
  int val_ = 0;
  i64 unit_ = 0;
};

int valuation(const PAdicScalar& x);

}  // namespace newmc
