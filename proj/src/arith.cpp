#include "newmc/arith.hpp"

#include <numeric>
#include <string>

namespace newmc {

i64 ipow(i64 base, int exp) {
  if (exp < 0) throw std::domain_error("ipow: negative exponent");
  i64 r = 1;
  for (int k = 0; k < exp; ++k) r = checked_mul(r, base);
  return r;
}

i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 r = 1;
  base = floor_mod(base, m);
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

i64 invmod(i64 a, i64 m) {
  i64 old_r = floor_mod(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    i64 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return floor_mod(old_s, m);
}

int int_valuation(i64 x, i64 p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

i64 phi_prime_power(i64 p, int e) {
  if (e <= 0) return 1;
  return ipow(p, e - 1) * (p - 1);
}

std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

i64 lcm_checked(i64 a, i64 b) { return checked_mul(a / std::gcd(a, b), b); }

int legendre(i64 a, i64 p) {
  a = floor_mod(a, p);
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

i64 sqrt_mod_prime(i64 a, i64 p) {
  a = floor_mod(a, p);
  if (a == 0 || legendre(a, p) != 1) throw std::domain_error("sqrt_mod_prime: not a nonzero square");
  // p - 1 = q * 2^s with q odd
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (legendre(z, p) != -1) ++z;
  i64 m = s;
  i64 c = powmod(z, q, p);
  i64 t = powmod(a, q, p);
  i64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 k = 0;
    i64 tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++k;
    }
    i64 b = c;
    for (i64 j = 0; j < m - k - 1; ++j) b = mulmod(b, b, p);
    m = k;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in addition");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in multiplication");
  return r;
}

}  // namespace newmc
