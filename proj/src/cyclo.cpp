#include "newmc/cyclo.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace newmc {

i64 euler_phi(i64 n) {
  i64 r = n;
  for (i64 f : prime_factors(n)) r = r / f * (f - 1);
  return r;
}

i64 radical(i64 n) {
  i64 r = 1;
  for (i64 f : prime_factors(n)) r *= f;
  return r;
}

namespace {

std::vector<i64> poly_divide_exact(std::vector<i64> num, const std::vector<i64>& den) {
  // den monic
  const std::size_t dn = den.size() - 1;
  std::vector<i64> q(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const i64 c = num[k];
    q[k - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  for (std::size_t j = 0; j < dn; ++j)
    if (num[j] != 0) throw std::logic_error("cyclotomic division not exact");
  return q;
}

std::vector<i64> compute_cyclotomic(i64 M) {
  const i64 R = radical(M);
  if (R != M) {
    const auto& base = cyclotomic_polynomial(R);
    const i64 s = M / R;
    std::vector<i64> out(static_cast<std::size_t>((base.size() - 1) * s + 1), 0);
    for (std::size_t j = 0; j < base.size(); ++j) out[j * static_cast<std::size_t>(s)] = base[j];
    return out;
  }
  std::vector<i64> num(static_cast<std::size_t>(M) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(M)] = 1;
  for (i64 d = 1; d < M; ++d)
    if (M % d == 0) num = poly_divide_exact(num, cyclotomic_polynomial(d));
  return num;
}

const std::vector<std::complex<double>>& twiddles(i64 M) {
  static std::mutex mu;
  static std::map<i64, std::shared_ptr<std::vector<std::complex<double>>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[M];
  if (!slot) {
    slot = std::make_shared<std::vector<std::complex<double>>>(static_cast<std::size_t>(M));
    for (i64 e = 0; e < M; ++e) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(M);
      (*slot)[static_cast<std::size_t>(e)] = {std::cos(t), std::sin(t)};
    }
  }
  return *slot;
}

}  // namespace

const std::vector<i64>& cyclotomic_polynomial(i64 M) {
  static std::recursive_mutex mu;
  static std::map<i64, std::vector<i64>> cache;
  if (M < 1) throw std::invalid_argument("cyclotomic_polynomial: M must be positive");
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<i64> poly;
  if (M == 1) {
    poly = {-1, 1};
  } else {
    poly = compute_cyclotomic(M);
  }
  return cache.emplace(M, std::move(poly)).first->second;
}

void RootSum::add_shifted(const RootSum& other, i64 shift, i64 c) {
  if (M_ % other.M_ != 0) throw std::invalid_argument("RootSum: incompatible modulus");
  const i64 step = M_ / other.M_;
  const i64 base = floor_mod(shift, M_);
  for (i64 e = 0; e < other.M_; ++e) {
    const i64 v = other.counts_[static_cast<std::size_t>(e)];
    if (v == 0) continue;
    auto& slot = counts_[static_cast<std::size_t>((base + e * step) % M_)];
    slot = checked_add(slot, checked_mul(c, v));
  }
}

i64 RootSum::term_count() const {
  i64 t = 0;
  for (i64 c : counts_) t += c < 0 ? -c : c;
  return t;
}

std::complex<double> RootSum::embed() const {
  const auto& tw = twiddles(M_);
  std::complex<double> s = 0;
  for (i64 e = 0; e < M_; ++e) {
    const i64 c = counts_[static_cast<std::size_t>(e)];
    if (c != 0) s += static_cast<double>(c) * tw[static_cast<std::size_t>(e)];
  }
  return s;
}

CycloValue::CycloValue(i64 M) : M_(M) {
  if (M < 1) throw std::invalid_argument("CycloValue: modulus must be positive");
  const i64 ph = euler_phi(M);
  if (ph > kCycloBudget) throw std::length_error("CycloValue: phi(M) exceeds the exact-arithmetic budget");
  coeffs_.assign(static_cast<std::size_t>(ph), BigInt(0));
}

CycloValue CycloValue::reduce_buckets(i64 M, std::vector<BigInt> b, Rational scale) {
  CycloValue out(M);
  out.scale_ = scale;
  const i64 R = radical(M);
  const i64 s = M / R;
  const auto& phiR = cyclotomic_polynomial(R);
  const std::size_t dR = phiR.size() - 1;
  std::vector<BigInt> block(static_cast<std::size_t>(R));
  for (i64 l = 0; l < s; ++l) {
    for (i64 h = 0; h < R; ++h) block[static_cast<std::size_t>(h)] = b[static_cast<std::size_t>(h * s + l)];
    for (std::size_t h = static_cast<std::size_t>(R); h-- > dR;) {
      if (block[h] == 0) continue;
      const BigInt c = block[h];
      for (std::size_t j = 0; j <= dR; ++j)
        if (phiR[j] != 0) block[h - dR + j] -= c * phiR[j];
    }
    for (std::size_t h = 0; h < dR; ++h)
      out.coeffs_[h * static_cast<std::size_t>(s) + static_cast<std::size_t>(l)] = block[h];
  }
  if (out.is_zero()) out.scale_ = 1;
  return out;
}

CycloValue CycloValue::from_sum(const RootSum& s) {
  std::vector<BigInt> b(s.counts().begin(), s.counts().end());
  return reduce_buckets(s.modulus(), std::move(b), Rational(1));
}

CycloValue CycloValue::integer(i64 M, i64 c) {
  CycloValue out(M);
  out.coeffs_[0] = c;
  return out;
}

bool CycloValue::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

CycloValue CycloValue::scaled(const Rational& r) const {
  CycloValue out = *this;
  out.scale_ *= r;
  if (out.scale_.numerator() == 0) {
    out = CycloValue(M_);
  }
  return out;
}

CycloValue CycloValue::lift(i64 M2) const {
  if (M2 % M_ != 0) throw std::invalid_argument("CycloValue::lift: not a multiple");
  if (M2 == M_) return *this;
  const i64 step = M2 / M_;
  std::vector<BigInt> b(static_cast<std::size_t>(M2), BigInt(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) b[j * static_cast<std::size_t>(step)] = coeffs_[j];
  return reduce_buckets(M2, std::move(b), scale_);
}

CycloValue CycloValue::conj() const {
  std::vector<BigInt> b(static_cast<std::size_t>(M_), BigInt(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    b[static_cast<std::size_t>(floor_mod(-static_cast<i64>(j), M_))] += coeffs_[j];
  return reduce_buckets(M_, std::move(b), scale_);
}

std::complex<double> CycloValue::embed() const {
  const auto& tw = twiddles(M_);
  std::complex<double> s = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0) s += coeffs_[j].convert_to<double>() * tw[j];
  return s * (static_cast<double>(scale_.numerator()) / static_cast<double>(scale_.denominator()));
}

namespace {

i64 common_modulus(i64 a, i64 b) { return lcm_checked(a, b); }

// Coefficients of x rescaled to the denominator L.
std::vector<BigInt> rescaled(const CycloValue& x, i64 L) {
  std::vector<BigInt> out = x.coeffs();
  const BigInt f = BigInt(x.scale().numerator()) * (L / x.scale().denominator());
  for (auto& c : out) c *= f;
  return out;
}

}  // namespace

CycloValue CycloValue::operator+(const CycloValue& o) const {
  const i64 M = common_modulus(M_, o.M_);
  const CycloValue a = lift(M), b = o.lift(M);
  const i64 L = lcm_checked(a.scale_.denominator(), b.scale_.denominator());
  auto ca = rescaled(a, L);
  const auto cb = rescaled(b, L);
  CycloValue out(M);
  for (std::size_t j = 0; j < ca.size(); ++j) out.coeffs_[j] = ca[j] + cb[j];
  out.scale_ = Rational(1, L);
  if (out.is_zero()) out.scale_ = 1;
  return out;
}

CycloValue CycloValue::operator-() const {
  CycloValue out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

CycloValue CycloValue::operator-(const CycloValue& o) const { return *this + (-o); }

CycloValue CycloValue::operator*(const CycloValue& o) const {
  const i64 M = common_modulus(M_, o.M_);
  const CycloValue a = lift(M), b = o.lift(M);
  std::vector<BigInt> buckets(static_cast<std::size_t>(M), BigInt(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j] == 0) continue;
      buckets[(i + j) % static_cast<std::size_t>(M)] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return reduce_buckets(M, std::move(buckets), a.scale_ * b.scale_);
}

CycloValue cycloAdd(const CycloValue& a, const CycloValue& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("cycloAdd: modulus mismatch");
  return a + b;
}

CycloValue cycloMul(const CycloValue& a, const CycloValue& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("cycloMul: modulus mismatch");
  return a * b;
}

CycloValue rootOfUnity(i64 M, i64 e) {
  RootSum s(M);
  s.add(e);
  return CycloValue::from_sum(s);
}

bool isZero(const CycloValue& a) { return a.is_zero(); }

bool exact_equal(const CycloRatio& x, const CycloRatio& y) {
  if (x.den.modulus() == y.den.modulus() && x.den.scale() == y.den.scale() && x.den.coeffs() == y.den.coeffs())
    return (x.num - y.num).is_zero();
  return (x.num * y.den - y.num * x.den).is_zero();
}

}  // namespace newmc
