#pragma once

// Characters of F = Q_p and of quadratic extensions E/F, with values encoded
// as exponents of a primitive root of unity.

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "newmc/cyclo.hpp"
#include "newmc/padic.hpp"
#include "newmc/quad_ext.hpp"

namespace newmc {

/// psi(r / p^t) = exp(2 pi i r / p^t) as an exponent mod M.  Requires p^t | M.
inline i64 psi_exponent(i64 r, i64 pt, i64 M) { return floor_mod(r, pt) * (M / pt); }

/// Additive character psi of F with conductor exponent 0, and psi_E = psi o tr.
class AdditiveChar {
 public:
  explicit AdditiveChar(i64 p) : p_(p) {}

  i64 p() const { return p_; }
  /// Exponent of psi(x) modulo M; M must be divisible by the denominator of x.
  i64 exponent(const PAdicScalar& x, i64 M) const;
  std::complex<double> value(const PAdicScalar& x) const;
  /// psi_E(x) = psi(2 a) for x = a + b sqrt D.
  std::complex<double> value_E(const QuadExtElement& x) const;

 private:
  i64 p_;
};

/// Character of o^x of level a: chi(g^t) = zeta_{phi(p^a)}^{c t} for the
/// fixed primitive root g mod p^a.  chi(p) = zeta^{pi_exp}.
class MultChar {
 public:
  MultChar(i64 p, int level, i64 c, i64 pi_exp = 0);

  i64 p() const { return p_; }
  int level() const { return level_; }
  i64 exp_on_generator() const { return c_; }
  /// phi(p^level), the order of the value group.
  i64 order() const { return order_; }
  i64 modulus() const { return mod_; }
  i64 pi_exponent() const { return pi_exp_; }

  /// Exponent of chi(u) mod M for a unit residue u (any representative);
  /// requires order() | M.
  i64 exponent(i64 u, i64 M) const;
  std::complex<double> value(i64 u) const;
  /// Level recomputed from the values: smallest j with chi trivial on U_j.
  int conductor() const;
  MultChar inverse() const { return MultChar(p_, level_, -c_, -pi_exp_); }

 private:
  i64 p_;
  int level_;
  i64 c_;
  i64 pi_exp_;
  i64 order_;
  i64 mod_;
  std::shared_ptr<const DiscreteLog> logs_;
};

/// Character theta of E^x trivial on F^x, tabulated on (o_E / p_E^k)^x.
class ThetaChar {
 public:
  ThetaChar(const QuadExtContext& E, int level, i64 value_order, std::vector<std::int32_t> table, i64 pi_exp);

  const QuadExtContext& ext() const { return ext_; }
  int level() const { return level_; }
  const ExtResidueRing& ring() const { return ring_; }
  /// Values are powers of zeta_{value_order}.
  i64 value_order() const { return order_; }
  /// Exponent of theta(varpi_E) modulo value_order (0 or order/2).
  i64 pi_exponent() const { return pi_exp_; }

  /// Exponent of theta(w) for a unit residue w of o_E / p_E^level.
  i64 unit_exponent(const ExtResidue& w) const;
  /// Exponent of theta(varpi_E^c w) modulo M; value_order | M required.
  i64 exponent(int c, const ExtResidue& w, i64 M) const;
  std::complex<double> value(int c, const ExtResidue& w) const;

  /// theta o conj.
  ThetaChar conjugate() const;
  /// Same character with theta(varpi_E) negated (ramified only).
  ThetaChar with_flipped_pi_sign() const;
  /// Conductor recomputed from the table.
  int conductor() const;

 private:
  QuadExtContext ext_;
  int level_;
  ExtResidueRing ring_;
  i64 order_;
  std::vector<std::int32_t> table_;
  i64 pi_exp_;
};

/// Structure of a finite abelian group given by generators: the element with
/// coordinate vector x (w.r.t. the generators) maps to (x Q) mod d in
/// the invariant-factor decomposition Z/d_1 x ... x Z/d_r.
struct AbelianStructure {
  std::vector<i64> invariants;          // d_1 | d_2 | ... (trivial factors dropped)
  std::vector<std::vector<i64>> Q;      // column transform, size r x invariants.size()
};

/// Hermite normal form then Smith normal form of the relation lattice of Z^r.
/// relations must span a full-rank lattice containing N Z^r.
AbelianStructure smith_structure(const std::vector<std::vector<i64>>& relations, int r, i64 N);

/// Options for buildTheta: which valid character to return (in enumeration
/// order) and the sign of theta(varpi_E) in the ramified case.
struct ThetaOptions {
  i64 choice = 0;
  int pi_sign = 1;
};

/// Dual-group construction of a character of E^x trivial on F^x with exact
/// conductor target_level.  Throws std::invalid_argument for odd levels in the
/// ramified case (no such character exists).
ThetaChar buildTheta(const QuadExtContext& E, int target_level, ThetaOptions opts = {});

/// alpha_chi = p^{-a} u with chi(1 + dx) = psi(alpha dx) for dx in p^{ceil(a/2)};
/// the unit u is determined modulo p^{floor(a/2)} and is returned reduced.
PAdicScalar alphaOfChi(const MultChar& chi, const ContextPtr& ctx);

/// Purely imaginary alpha = beta sqrt D with v_E(alpha) = -a(theta) - e_E + 1 and
/// theta(1 + du) = psi_E(alpha du) for du in p_E^{ceil(a(theta)/2)}.
QuadExtElement alphaOfTheta(const ThetaChar& theta, const ContextPtr& ctx);

/// Root-of-unity sum sum_{u in (o/p^n0)^x} mu(u) psi(-u / p^n0) in modulus M.
RootSum gauss_sum_ps(const MultChar& mu, int n0, i64 M);
/// Modulus used by gaussC0PrincipalSeries.
i64 gauss_modulus_ps(const MultChar& mu, int n0);
/// q^{-n0} times the sum above, with n0 = a(mu) unless given.
CycloValue gaussC0PrincipalSeries(const MultChar& mu, std::optional<int> n0 = std::nullopt);

/// Exponent c of the shell varpi_E^c o_E^x: -a(theta) - e_E + 1.
int shell_exponent(const ThetaChar& theta);
/// Level t with psi_E(varpi_E^c w) = psi(r / p^t).
int shell_psi_level(const ThetaChar& theta);
/// psi_E(varpi_E^c w) as r / p^t: returns r (t = shell_psi_level).
i64 shell_trace_numerator(const ThetaChar& theta, const ExtResidue& w);
/// The F-components of varpi_E^c w as fractions over p^{shell_psi_level}
/// (a part) and, for the norm, N(varpi_E^c w) = num / p^n with num a unit.
i64 shell_norm_numerator(const ThetaChar& theta, const ExtResidue& w, i64 mod);
RootSum gauss_sum_sc(const ThetaChar& theta, i64 M);
i64 gauss_modulus_sc(const ThetaChar& theta);
/// Shell integral of theta^{-1}(u) psi_E(u) d^x u with d^x u = du / |u|_E and
/// vol(o_E) = 1, so each coset of 1 + p_E^k has mass q^{-f k}.
CycloValue gaussC0Supercuspidal(const ThetaChar& theta);

}  // namespace newmc
