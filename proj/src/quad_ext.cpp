#include "newmc/quad_ext.hpp"

#include <algorithm>

namespace newmc {

QuadExtContext::QuadExtContext(ContextPtr base, ExtKind kind) : base_(std::move(base)), kind_(kind) {
  if (!base_) throw std::invalid_argument("QuadExtContext: null base context");
  const i64 p = base_->p();
  if (kind_ == ExtKind::Ramified) {
    D_ = p;
  } else {
    D_ = 2;
    while (legendre(D_, p) != -1) ++D_;
  }
}

PAdicScalar QuadExtContext::D() const { return PAdicScalar::from_integer(base_, D_); }

int QuadExtContext::a_exp(int k) const { return kind_ == ExtKind::Ramified ? ceil_div(k, 2) : k; }
int QuadExtContext::b_exp(int k) const { return kind_ == ExtKind::Ramified ? k / 2 : k; }

QuadExtElement ext_add(const QuadExtContext&, const QuadExtElement& x, const QuadExtElement& y) {
  return {x.a + y.a, x.b + y.b};
}

QuadExtElement ext_mul(const QuadExtContext& E, const QuadExtElement& x, const QuadExtElement& y) {
  const auto D = E.D();
  return {x.a * y.a + D * x.b * y.b, x.a * y.b + x.b * y.a};
}

QuadExtElement ext_conj(const QuadExtElement& x) { return {x.a, -x.b}; }

PAdicScalar ext_trace(const QuadExtElement& x) { return x.a + x.a; }

PAdicScalar extNorm(const QuadExtContext& E, const QuadExtElement& x) {
  const auto n = x.a * x.a - E.D() * x.b * x.b;
  if (n.is_zero() && !(x.a.is_zero() && x.b.is_zero())) throw std::domain_error("insufficient precision");
  return n;
}

int extValuation(const QuadExtContext& E, const QuadExtElement& x) {
  if (x.a.is_zero() && x.b.is_zero()) throw std::domain_error("infinite valuation");
  constexpr int kInf = 1 << 29;
  const int va = x.a.is_zero() ? kInf : x.a.valuation();
  const int vb = x.b.is_zero() ? kInf : x.b.valuation();
  if (E.kind() == ExtKind::Unramified) return std::min(va, vb);
  return std::min(va == kInf ? kInf : 2 * va, vb == kInf ? kInf : 2 * vb + 1);
}

ExtResidueRing::ExtResidueRing(const QuadExtContext& E, int k)
    : p_(E.p()), k_(k), D_(E.D_int()), ramified_(E.kind() == ExtKind::Ramified) {
  if (k < 1) throw std::invalid_argument("ExtResidueRing: level must be >= 1");
  ma_ = ipow(p_, E.a_exp(k));
  mb_ = ipow(p_, E.b_exp(k));
}

i64 ExtResidueRing::unit_count() const {
  if (ramified_) return (p_ - 1) * ipow(p_, k_ - 1);
  return (p_ * p_ - 1) * ipow(p_, 2 * (k_ - 1));
}

ExtResidue ExtResidueRing::mul(const ExtResidue& x, const ExtResidue& y) const {
  // the a-coordinate needs b1 b2 only modulo ma / D when ramified
  const i64 a = addmod(mulmod(x.a, y.a, ma_), mulmod(D_, mulmod(x.b, y.b, ma_), ma_), ma_);
  const i64 b = addmod(mulmod(x.a, y.b, mb_), mulmod(x.b, y.a, mb_), mb_);
  return {a, b};
}

bool ExtResidueRing::is_unit(const ExtResidue& x) const {
  if (ramified_) return x.a % p_ != 0;
  return x.a % p_ != 0 || x.b % p_ != 0;
}

ExtResidue ExtResidueRing::pow(ExtResidue x, i64 e) const {
  ExtResidue r{1 % ma_, 0};
  while (e > 0) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

ExtResidue ExtResidueRing::inverse(const ExtResidue& x) const {
  if (!is_unit(x)) throw std::domain_error("ExtResidueRing: not a unit");
  // x^{-1} = conj(x) / N(x); N(x) is a unit of o
  const i64 big = std::max(ma_, mb_);
  const i64 n = floor_mod(mulmod(x.a, x.a, big) - mulmod(D_, mulmod(x.b, x.b, big), big), big);
  const i64 ninv = invmod(n, big);
  return reduce(mulmod(x.a, ninv, big), mulmod(floor_mod(-x.b, big), ninv, big));
}

std::vector<ExtResidue> unitShellReps(const QuadExtContext& E, int k) {
  ExtResidueRing R(E, k);
  if (R.unit_count() > kShellBudget) throw std::length_error("unitShellReps: enumeration budget exceeded");
  std::vector<ExtResidue> out;
  out.reserve(static_cast<std::size_t>(R.unit_count()));
  for (i64 idx = 0; idx < R.size(); ++idx) {
    auto x = R.from_index(idx);
    if (R.is_unit(x)) out.push_back(x);
  }
  return out;
}

}  // namespace newmc
