#include "newmc/exponents.hpp"

#include <stdexcept>
#include <string>

namespace newmc {

Rational supnormExponent(const Rational& eta1, const Rational& delta, const Rational& eta2) {
  if (eta1 < Rational(0) || eta2 < eta1) throw std::invalid_argument("supnormExponent: need 0 <= eta1 <= eta2");
  return delta / 2 + eta1 / 2 - eta2 / 6;
}

Rational depthExponent(const Rational& eta1, const Rational& delta, const Rational& eta2) {
  return supnormExponent(eta1, delta, eta2) / 2;
}

i64 FiltrationSchedule::product_size() const {
  i64 s = 1;
  for (const auto& [p, v] : eta) s = checked_mul(s, static_cast<i64>(v.size()));
  return s;
}

FiltrationSchedule filtrationSchedule(const std::map<i64, int>& a1, const Rational& eta1, const Rational& eta2) {
  FiltrationSchedule out;
  out.amplifier = eta2 / 3;
  for (const auto& [p, a] : a1) {
    if (a < 1) throw std::invalid_argument("filtrationSchedule: a1 must be at least 1");
    auto& v = out.eta[p];
    for (int i = 1; i <= a + 1; ++i) v.push_back(eta1 + Rational(i - 1) * (eta2 - eta1) / Rational(a));
  }
  return out;
}

int filtrationLevel(int n1, const Rational& eta) {
  if (eta < Rational(0) || eta > Rational(1, 2)) throw std::invalid_argument("filtrationLevel: need 0 <= eta <= 1/2");
  const Rational x = Rational(n1) * eta / 2;
  return static_cast<int>(x.numerator() / x.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace newmc
