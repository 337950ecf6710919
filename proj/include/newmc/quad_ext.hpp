#pragma once

// Quadratic extensions E = F(sqrt D) of F = Q_p.  Unramified: D is the
// smallest quadratic non-residue mod p.  Ramified: D = p, so sqrt D is a
// uniformizer of E.

#include <vector>

#include "newmc/padic.hpp"

namespace newmc {

enum class ExtKind { Unramified, Ramified };

class QuadExtContext {
 public:
  QuadExtContext(ContextPtr base, ExtKind kind);

  const ContextPtr& base() const { return base_; }
  i64 p() const { return base_->p(); }
  ExtKind kind() const { return kind_; }
  /// Ramification index e_E.
  int e() const { return kind_ == ExtKind::Ramified ? 2 : 1; }
  /// Residue degree f = 2 / e_E.
  int f() const { return 3 - e(); }
  /// D as an integer (a non-residue unit, or p).
  i64 D_int() const { return D_; }
  PAdicScalar D() const;

  /// Moduli of the a- and b-coordinates of o_E / p_E^k.
  int a_exp(int k) const;
  int b_exp(int k) const;

 private:
  ContextPtr base_;
  ExtKind kind_;
  i64 D_;
};

struct QuadExtElement {
  PAdicScalar a;
  PAdicScalar b;
};

QuadExtElement ext_add(const QuadExtContext& E, const QuadExtElement& x, const QuadExtElement& y);
QuadExtElement ext_mul(const QuadExtContext& E, const QuadExtElement& x, const QuadExtElement& y);
QuadExtElement ext_conj(const QuadExtElement& x);
PAdicScalar ext_trace(const QuadExtElement& x);

/// a^2 - D b^2.  Throws std::domain_error("insufficient precision") when the
/// result cancels to zero for a nonzero input.
PAdicScalar extNorm(const QuadExtContext& E, const QuadExtElement& x);

/// v_E(x): min(v(a), v(b)) if unramified, min(2 v(a), 2 v(b) + 1) if ramified.
int extValuation(const QuadExtContext& E, const QuadExtElement& x);

/// Integer residue a + b sqrt D of o_E modulo p_E^k.
struct ExtResidue {
  i64 a = 0;
  i64 b = 0;
  bool operator==(const ExtResidue&) const = default;
};

/// The ring o_E / p_E^k with coordinates a mod p^{a_exp}, b mod p^{b_exp}.
class ExtResidueRing {
 public:
  ExtResidueRing(const QuadExtContext& E, int k);

  i64 p() const { return p_; }
  int level() const { return k_; }
  i64 mod_a() const { return ma_; }
  i64 mod_b() const { return mb_; }
  i64 D() const { return D_; }
  /// Number of residues, q^{f k}.
  i64 size() const { return ma_ * mb_; }
  /// |(o_E / p_E^k)^x|.
  i64 unit_count() const;

  ExtResidue reduce(i64 a, i64 b) const { return {floor_mod(a, ma_), floor_mod(b, mb_)}; }
  ExtResidue mul(const ExtResidue& x, const ExtResidue& y) const;
  bool is_unit(const ExtResidue& x) const;
  ExtResidue inverse(const ExtResidue& x) const;
  ExtResidue pow(ExtResidue x, i64 e) const;
  i64 index(const ExtResidue& x) const { return x.a + x.b * ma_; }
  ExtResidue from_index(i64 idx) const { return {idx % ma_, idx / ma_}; }

 private:
  i64 p_;
  int k_;
  i64 D_;
  bool ramified_;
  i64 ma_;
  i64 mb_;
};

/// Transversal of o_E^x / (1 + p_E^k), in index order.
std::vector<ExtResidue> unitShellReps(const QuadExtContext& E, int k);

/// Largest transversal unitShellReps will produce.
constexpr i64 kShellBudget = 5'000'000;

}  // namespace newmc
