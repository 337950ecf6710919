#include "newmc/padic.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace newmc {

i64 primitive_root_prime_power(i64 p, int e) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("primitive root requires an odd prime");
  const auto factors = prime_factors(p - 1);
  for (i64 g = 2; g < p * p + 2; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (i64 f : factors)
      if (powmod(g, (p - 1) / f, p) == 1) ok = false;
    if (!ok) continue;
    // a generator mod p lifts to a generator mod every p^e unless g^(p-1) == 1 mod p^2
    if (e >= 2 && powmod(g, p - 1, p * p) == 1) continue;
    return g;
  }
  throw std::logic_error("no primitive root found");
}

DiscreteLog::DiscreteLog(i64 p, int e) : p_(p), e_(e) {
  if (e < 1) throw std::invalid_argument("DiscreteLog: exponent must be >= 1");
  mod_ = ipow(p, e);
  if (mod_ > kTableLimit) throw std::invalid_argument("DiscreteLog: p^K exceeds the table budget");
  order_ = phi_prime_power(p, e);
  gen_ = primitive_root_prime_power(p, e);
  table_.assign(static_cast<std::size_t>(mod_), -1);
  i64 x = 1;
  for (i64 t = 0; t < order_; ++t) {
    table_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(t);
    x = mulmod(x, gen_, mod_);
  }
  if (x != 1) throw std::logic_error("DiscreteLog: generator order mismatch");
}

i64 DiscreteLog::log(i64 u) const {
  const i64 r = floor_mod(u, mod_);
  const auto t = table_[static_cast<std::size_t>(r)];
  if (t < 0) throw std::domain_error("DiscreteLog: argument is not a unit");
  return t;
}

PAdicContext::PAdicContext(i64 p, int K) : p_(p), K_(K) {
  if (p == 2) throw std::invalid_argument("p = 2 is not supported");
  if (!is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (K < 1) throw std::invalid_argument("precision K must be >= 1");
  pK_ = ipow(p, K);
  if (pK_ > (i64{1} << 40)) throw std::invalid_argument("p^K too large for int64 residues");
  gen_ = primitive_root_prime_power(p, K);
  powers_.resize(static_cast<std::size_t>(K) + 1);
  powers_[0] = 1;
  for (int e = 1; e <= K; ++e) powers_[e] = powers_[e - 1] * p;
}

const DiscreteLog& PAdicContext::logs() const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (!logs_) logs_ = std::make_shared<const DiscreteLog>(p_, K_);
  return *logs_;
}

i64 PAdicContext::pow(int e) const {
  if (e < 0 || e > K_) throw std::out_of_range("PAdicContext::pow exponent out of range");
  return powers_[e];
}

ContextPtr make_context(i64 p, int K) { return std::make_shared<const PAdicContext>(p, K); }

PAdicScalar PAdicScalar::zero(ContextPtr ctx) {
  PAdicScalar r;
  r.ctx_ = std::move(ctx);
  return r;
}

PAdicScalar PAdicScalar::make(ContextPtr ctx, int val, i64 unit) {
  if (!ctx) throw std::invalid_argument("PAdicScalar: null context");
  if (floor_mod(unit, ctx->p()) == 0) throw std::invalid_argument("PAdicScalar: unit part divisible by p");
  PAdicScalar r;
  r.zero_ = false;
  r.val_ = val;
  r.unit_ = floor_mod(unit, ctx->pK());
  r.ctx_ = std::move(ctx);
  return r;
}

PAdicScalar PAdicScalar::from_integer(ContextPtr ctx, i64 x) {
  if (x == 0) return zero(std::move(ctx));
  const int v = int_valuation(x, ctx->p());
  i64 u = x;
  for (int k = 0; k < v; ++k) u /= ctx->p();
  return make(std::move(ctx), v, u);
}

PAdicScalar PAdicScalar::from_rational(ContextPtr ctx, i64 num, i64 den) {
  if (den == 0) throw std::domain_error("PAdicScalar: zero denominator");
  auto n = from_integer(ctx, num);
  auto d = from_integer(ctx, den);
  return n / d;
}

int PAdicScalar::valuation() const {
  if (zero_) throw std::domain_error("infinite valuation");
  return val_;
}

i64 PAdicScalar::unit() const {
  if (zero_) throw std::domain_error("zero has no unit part");
  return unit_;
}

i64 PAdicScalar::unit_mod(int e) const {
  if (e > ctx_->K()) throw std::domain_error("insufficient precision for unit_mod");
  return floor_mod(unit(), ctx_->pow(e));
}

i64 PAdicScalar::residue_mod(int e) const {
  if (zero_ || e <= 0) return 0;
  if (val_ < 0) throw std::domain_error("residue_mod of a non-integral element");
  if (val_ >= e) return 0;
  if (e - val_ > ctx_->K()) throw std::domain_error("insufficient precision for residue_mod");
  const i64 mod = ipow(ctx_->p(), e);
  return mulmod(ipow(ctx_->p(), val_), unit_, mod);
}

std::pair<i64, int> PAdicScalar::fractional_part() const {
  if (zero_ || val_ >= 0) return {0, 0};
  const int t = -val_;
  if (t > ctx_->K()) throw std::domain_error("insufficient precision for fractional part");
  return {floor_mod(unit_, ctx_->pow(t)), t};
}

void PAdicScalar::check_same(const PAdicScalar& o) const {
  if (!ctx_ || !o.ctx_) throw std::invalid_argument("PAdicScalar: unbound value");
  if (ctx_->p() != o.ctx_->p() || ctx_->K() != o.ctx_->K())
    throw std::invalid_argument("mixed-precision arithmetic refused");
}

PAdicScalar PAdicScalar::operator-() const {
  if (zero_) return *this;
  PAdicScalar r = *this;
  r.unit_ = floor_mod(-unit_, ctx_->pK());
  return r;
}

PAdicScalar PAdicScalar::operator+(const PAdicScalar& o) const {
  check_same(o);
  if (zero_) return o;
  if (o.zero_) return *this;
  const int v = std::min(val_, o.val_);
  const i64 pK = ctx_->pK();
  auto aligned = [&](const PAdicScalar& x) -> i64 {
    const int s = x.val_ - v;
    if (s >= ctx_->K()) return 0;
    return mulmod(x.unit_, ctx_->pow(s), pK);
  };
  const i64 s = addmod(aligned(*this), aligned(o), pK);
  if (s == 0) return zero(ctx_);
  const int t = int_valuation(s, ctx_->p());
  PAdicScalar r;
  r.ctx_ = ctx_;
  r.zero_ = false;
  r.val_ = v + t;
  r.unit_ = s / ctx_->pow(t);
  return r;
}

PAdicScalar PAdicScalar::operator-(const PAdicScalar& o) const { return *this + (-o); }

PAdicScalar PAdicScalar::operator*(const PAdicScalar& o) const {
  check_same(o);
  if (zero_ || o.zero_) return zero(ctx_);
  PAdicScalar r;
  r.ctx_ = ctx_;
  r.zero_ = false;
  r.val_ = val_ + o.val_;
  r.unit_ = mulmod(unit_, o.unit_, ctx_->pK());
  return r;
}

PAdicScalar PAdicScalar::inverse() const {
  if (zero_) throw std::domain_error("division by zero");
  PAdicScalar r = *this;
  r.val_ = -val_;
  r.unit_ = invmod(unit_, ctx_->pK());
  return r;
}

PAdicScalar PAdicScalar::operator/(const PAdicScalar& o) const { return *this * o.inverse(); }

PAdicScalar PAdicScalar::shift(int e) const {
  if (zero_) return *this;
  PAdicScalar r = *this;
  r.val_ += e;
  return r;
}

bool PAdicScalar::operator==(const PAdicScalar& o) const {
  check_same(o);
  if (zero_ || o.zero_) return zero_ == o.zero_;
  return val_ == o.val_ && unit_ == o.unit_;
}

double PAdicScalar::to_double() const {
  if (zero_) return 0.0;
  return std::pow(static_cast<double>(ctx_->p()), val_) * static_cast<double>(unit_);
}

std::string PAdicScalar::to_string() const {
  if (zero_) return "0";
  std::ostringstream os;
  os << ctx_->p() << "^" << val_ << "*" << unit_;
  return os.str();
}

int valuation(const PAdicScalar& x) { return x.valuation(); }

}  // namespace newmc
