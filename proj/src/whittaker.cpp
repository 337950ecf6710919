#include "newmc/whittaker.hpp"

#include <stdexcept>

namespace newmc {

std::string family_name(Family f) {
  switch (f) {
    case Family::PrincipalSeries: return "ps";
    case Family::SupercuspidalUnramified: return "sc-unramified";
    case Family::SupercuspidalRamified: return "sc-ramified";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "ps") return Family::PrincipalSeries;
  if (s == "sc-unramified") return Family::SupercuspidalUnramified;
  if (s == "sc-ramified") return Family::SupercuspidalRamified;
  throw std::invalid_argument("unknown family '" + s + "'");
}

ReprSpec ReprSpec::principal_series(const MultChar& mu) {
  if (mu.level() < 2) throw std::invalid_argument("principal series needs a(mu) >= 2");
  if (mu.conductor() != mu.level()) throw std::invalid_argument("principal series: mu must have exact conductor");
  ReprSpec s;
  s.family_ = Family::PrincipalSeries;
  s.p_ = mu.p();
  s.n_ = 2 * mu.level();
  s.mu_ = mu;
  s.ctx_ = make_context(s.p_, s.n_ + 6);
  return s;
}

ReprSpec ReprSpec::supercuspidal(const ThetaChar& theta) {
  if (theta.level() < 2) throw std::invalid_argument("supercuspidal needs a(theta) >= 2");
  ReprSpec s;
  const bool ram = theta.ext().kind() == ExtKind::Ramified;
  s.family_ = ram ? Family::SupercuspidalRamified : Family::SupercuspidalUnramified;
  s.p_ = theta.ext().p();
  s.n_ = ram ? theta.level() + 1 : 2 * theta.level();
  s.theta_ = theta;
  s.ctx_ = make_context(s.p_, s.n_ + 6);
  return s;
}

ReprSpec makeSpec(i64 p, int n, Family family, i64 choice) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  switch (family) {
    case Family::PrincipalSeries: {
      if (n % 2 != 0 || n < 4) throw std::invalid_argument("principal series needs even n >= 4");
      const int a = n / 2;
      i64 found = -1;
      for (i64 c = 1; c < phi_prime_power(p, a); ++c) {
        if (c % p == 0) continue;  // exact conductor a
        if (++found == choice) return ReprSpec::principal_series(MultChar(p, a, c));
      }
      throw std::invalid_argument("makeSpec: choice out of range");
    }
    case Family::SupercuspidalUnramified: {
      if (n % 2 != 0 || n < 4) throw std::invalid_argument("unramified supercuspidal needs even n >= 4");
      QuadExtContext E(make_context(p, n + 6), ExtKind::Unramified);
      return ReprSpec::supercuspidal(buildTheta(E, n / 2, {choice, 1}));
    }
    case Family::SupercuspidalRamified: {
      if (n % 2 != 1 || n < 3) throw std::invalid_argument("ramified supercuspidal needs odd n >= 3");
      QuadExtContext E(make_context(p, n + 6), ExtKind::Ramified);
      return ReprSpec::supercuspidal(buildTheta(E, n - 1, {choice, 1}));
    }
  }
  throw std::invalid_argument("makeSpec: bad family");
}

i64 ReprSpec::value_order() const { return is_ps() ? mu_->order() : theta_->value_order(); }

int ReprSpec::whittaker_level(int i) const {
  if (is_ps()) return n0();
  return std::max(n_ - i, 0);
}

i64 ReprSpec::whittaker_modulus(int i) const {
  int t;
  if (is_ps()) {
    t = n0();
  } else {
    t = std::max(shell_psi_level(*theta_), n_ - i);
  }
  return lcm_checked(value_order(), ipow(p_, t));
}

RootSum ReprSpec::c0_sum(i64 M) const {
  if (is_ps()) return gauss_sum_ps(*mu_, n0(), M);
  return gauss_sum_sc(*theta_, M);
}

i64 ReprSpec::sum_size(std::optional<int> shell_level) const {
  if (is_ps()) return phi_prime_power(p_, n0());
  return ExtResidueRing(theta_->ext(), shell_level.value_or(theta_->level())).unit_count();
}

RootSum ReprSpec::whittaker_sum(int i, i64 y, i64 M, std::optional<int> shell_level) const {
  RootSum s(M);
  accumulate_whittaker(i, y, s, 0, shell_level);
  return s;
}

void ReprSpec::accumulate_whittaker(int i, i64 y, RootSum& s, i64 shift0, std::optional<int> shell_level) const {
  if (i <= n0() || i > n_) throw std::out_of_range("whittaker: i must satisfy n0 < i <= n");
  const i64 M = s.modulus();
  if (is_ps()) {
    const int a = n0();
    const i64 pa = ipow(p_, a);
    const i64 yr = floor_mod(y, pa);
    const i64 shift = i - a >= a ? 0 : ipow(p_, i - a);
    for (i64 u = 1; u < pa; ++u) {
      if (u % p_ == 0) continue;
      const i64 yu = mulmod(yr, u, pa);
      i64 e = shift0 + mu_->exponent(yu, M) + psi_exponent(-yu, pa, M);
      if (shift != 0) e += mu_->exponent(1 + u * shift, M);
      s.add(e);
    }
    return;
  }
  const auto& th = *theta_;
  const int k = shell_level.value_or(th.level());
  if (k < th.level()) throw std::invalid_argument("whittaker: shell level below a(theta)");
  const int c = shell_exponent(th);
  const i64 pt = ipow(p_, shell_psi_level(th));
  const int sx = n_ - i;
  const i64 ps = sx > 0 ? ipow(p_, sx) : 1;
  const i64 yinv = sx > 0 ? invmod(floor_mod(y, ps), ps) : 0;
  for (const auto& w : unitShellReps(th.ext(), k)) {
    i64 e = shift0 - th.exponent(c, w, M) + psi_exponent(shell_trace_numerator(th, w), pt, M);
    if (sx > 0) {
      const i64 nn = shell_norm_numerator(th, w, ps);
      e += psi_exponent(-mulmod(yinv, nn, ps), ps, M);
    }
    s.add(e);
  }
}

namespace {

void check_query(const ReprSpec& spec, int i, const PAdicScalar& x) {
  if (i <= spec.n0() || i > spec.n()) throw std::out_of_range("whittaker: i must satisfy n0 < i <= n");
  if (!x.context()) throw std::invalid_argument("whittaker: unbound argument");
  if (x.context()->p() != spec.p()) throw std::invalid_argument("whittaker: prime mismatch");
  if (x.context()->K() < spec.n()) throw std::domain_error("whittaker: insufficient precision");
}

CycloRatio whittaker_impl(const ReprSpec& spec, int i, const PAdicScalar& x) {
  check_query(spec, i, x);
  const i64 M = spec.whittaker_modulus(i);
  CycloRatio out{CycloValue(M), CycloValue::from_sum(spec.c0_sum(M))};
  if (x.is_zero() || x.valuation() != 0) return out;
  out.num = CycloValue::from_sum(spec.whittaker_sum(i, x.unit_mod(spec.n()), M));
  return out;
}

}  // namespace

CycloRatio whittakerPS(const ReprSpec& spec, int i, const PAdicScalar& x) {
  if (!spec.is_ps()) throw std::invalid_argument("whittakerPS: not a principal series");
  return whittaker_impl(spec, i, x);
}

CycloRatio whittakerSC(const ReprSpec& spec, int i, const PAdicScalar& x) {
  if (spec.is_ps()) throw std::invalid_argument("whittakerSC: not a supercuspidal");
  return whittaker_impl(spec, i, x);
}

CycloRatio whittaker(const ReprSpec& spec, int i, const PAdicScalar& x) { return whittaker_impl(spec, i, x); }

std::complex<double> whittaker_value(const ReprSpec& spec, int i, const PAdicScalar& x, std::optional<int> shell_level) {
  check_query(spec, i, x);
  if (x.is_zero() || x.valuation() != 0) return 0.0;
  const i64 M = spec.whittaker_modulus(i);
  const auto num = spec.whittaker_sum(i, x.unit_mod(spec.n()), M, shell_level).embed();
  const auto den = spec.c0_sum(M).embed();
  return num / den * (static_cast<double>(spec.sum_size()) / static_cast<double>(spec.sum_size(shell_level)));
}

}  // namespace newmc
