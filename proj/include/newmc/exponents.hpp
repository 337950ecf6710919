#pragma once

// Exact exponent bookkeeping for the amplified sup-norm bound.

#include <map>
#include <string>
#include <vector>

#include "newmc/cyclo.hpp"

namespace newmc {

/// delta/2 + eta1/2 - eta2/6.  Requires 0 <= eta1 <= eta2.
Rational supnormExponent(const Rational& eta1, const Rational& delta, const Rational& eta2);
/// Half of supnormExponent (C1 ~ p^{n/2} in the depth aspect).
Rational depthExponent(const Rational& eta1, const Rational& delta, const Rational& eta2);

struct FiltrationSchedule {
  std::map<i64, std::vector<Rational>> eta;  // p -> eta_{p,1..a1+1}
  Rational amplifier;                        // eta2 / 3
  /// |R| = prod_p r_p.
  i64 product_size() const;
};

FiltrationSchedule filtrationSchedule(const std::map<i64, int>& a1, const Rational& eta1, const Rational& eta2);

/// j = floor(n1 eta / 2) for 0 <= eta <= 1/2; the filtration lattice is O(j + 1).
int filtrationLevel(int n1, const Rational& eta);

std::string to_string(const Rational& r);

}  // namespace newmc
