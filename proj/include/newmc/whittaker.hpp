#pragma once

// Newform Whittaker values W^(i)(x) = W_pi(a(x) n_-(varpi^i)) for principal
// series pi(mu, mu^{-1}) and dihedral supercuspidals attached to (E, theta).

#include <optional>
#include <string>

#include "newmc/characters.hpp"

namespace newmc {

enum class Family { PrincipalSeries, SupercuspidalUnramified, SupercuspidalRamified };

std::string family_name(Family f);
/// Accepts "ps", "sc-unramified", "sc-ramified".
Family parse_family(const std::string& s);

class ReprSpec {
 public:
  /// pi(mu, mu^{-1}) with n = 2 a(mu); requires a(mu) >= 2 and exact conductor.
  static ReprSpec principal_series(const MultChar& mu);
  /// Supercuspidal attached to theta: n = 2 a(theta) (unramified) or a(theta) + 1.
  static ReprSpec supercuspidal(const ThetaChar& theta);

  Family family() const { return family_; }
  bool is_ps() const { return family_ == Family::PrincipalSeries; }
  i64 p() const { return p_; }
  int n() const { return n_; }
  int n0() const { return n_ / 2; }
  int n1() const { return n_ - n_ / 2; }
  const MultChar& mu() const { return *mu_; }
  const ThetaChar& theta() const { return *theta_; }
  /// Working context with precision n + 6.
  const ContextPtr& context() const { return ctx_; }

  /// Order of the character values.
  i64 value_order() const;
  /// Level w such that W^(i)(x) depends on x only modulo p^w.
  int whittaker_level(int i) const;
  /// Root-of-unity order needed by the unnormalized W^(i) sums.
  i64 whittaker_modulus(int i) const;
  /// Unnormalized Gauss sum: sum_u mu(u) psi(-u / p^n0) or the shell sum.
  /// W^(i)(x) = whittaker_sum(i, x) / c0_sum.
  RootSum c0_sum(i64 M) const;
  /// Unnormalized sum for W^(i)(y), y a unit residue (any representative
  /// mod p^K).  shell_level >= a(theta) refines the shell transversal.
  RootSum whittaker_sum(int i, i64 y, i64 M, std::optional<int> shell_level = std::nullopt) const;
  /// Adds the terms of whittaker_sum(i, y, out.modulus()), each multiplied by
  /// zeta^shift, to out.
  void accumulate_whittaker(int i, i64 y, RootSum& out, i64 shift = 0,
                            std::optional<int> shell_level = std::nullopt) const;
  /// Number of summands of whittaker_sum / c0_sum.
  i64 sum_size(std::optional<int> shell_level = std::nullopt) const;

 private:
  ReprSpec() = default;
  Family family_ = Family::PrincipalSeries;
  i64 p_ = 0;
  int n_ = 0;
  std::optional<MultChar> mu_;
  std::optional<ThetaChar> theta_;
  ContextPtr ctx_;
};

/// Builds the choice-th representation of the family with conductor p^n.
ReprSpec makeSpec(i64 p, int n, Family family, i64 choice = 0);

/// W^(i)(x) as (numerator, C0) over a common modulus, normalized so that
/// W^(n)(1) = 1.  Zero numerator off v(x) = 0.
CycloRatio whittakerPS(const ReprSpec& spec, int i, const PAdicScalar& x);
CycloRatio whittakerSC(const ReprSpec& spec, int i, const PAdicScalar& x);
CycloRatio whittaker(const ReprSpec& spec, int i, const PAdicScalar& x);

/// Float value of W^(i)(x) with an optional refined shell transversal.
std::complex<double> whittaker_value(const ReprSpec& spec, int i, const PAdicScalar& x,
                                     std::optional<int> shell_level = std::nullopt);

}  // namespace newmc
