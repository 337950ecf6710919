#pragma once

// Integer helpers for residues modulo prime powers.  Every residue in the
// library fits in an int64; products go through __int128.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace newmc {

using i64 = std::int64_t;

inline i64 floor_mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(floor_mod(static_cast<i64>((static_cast<__int128>(a) * b) % m), m));
}

inline i64 addmod(i64 a, i64 b, i64 m) { return floor_mod(a + b, m); }

i64 ipow(i64 base, int exp);
i64 powmod(i64 base, i64 exp, i64 m);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
i64 invmod(i64 a, i64 m);

/// p-adic valuation of a nonzero integer.
int int_valuation(i64 x, i64 p);

bool is_prime(i64 n);

/// Euler phi of p^e (1 for e == 0).
i64 phi_prime_power(i64 p, int e);

std::vector<i64> prime_factors(i64 n);

i64 lcm_checked(i64 a, i64 b);

inline int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

/// Legendre symbol (a/p) for odd prime p: 0, 1 or -1.
int legendre(i64 a, i64 p);

/// Square root modulo an odd prime by Tonelli-Shanks.  Requires a to be a
/// nonzero quadratic residue.
i64 sqrt_mod_prime(i64 a, i64 p);

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

}  // namespace newmc
