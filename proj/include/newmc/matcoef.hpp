#pragma once

// Matrix coefficients Phi^(i)(a, m) = Phi_pi((a m; 0 1) n_-(varpi^i)) by direct
// summation of psi(m x) W^(i)(a x) over x in (o / p^k)^x, the translate
// Phi'(g) on K*(1), and the support / decay / dimension checks built on them.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

#include "newmc/whittaker.hpp"

namespace newmc {

struct MatCoefQuery {
  int i = 0;
  PAdicScalar a;
  PAdicScalar m;  // zero allowed
};

/// Phi = scale * num / c0_sum, with num a multiset of roots of unity.
struct PhiSum {
  RootSum num;
  Rational scale{1};
  i64 terms = 0;
  /// Returned as zero without summation (W^(i) vanishes off the units).
  bool structural_zero = false;
};

class PhiEvaluator {
 public:
  explicit PhiEvaluator(ReprSpec spec);

  const ReprSpec& spec() const { return spec_; }

  /// k such that the summand depends on x only modulo p^k.
  int x_level(const MatCoefQuery& q) const;
  /// Direct double sum with W^(i)(y) tabulated per residue y.
  PhiSum naive(const MatCoefQuery& q) const;
  /// The same double sum with every W^(i)(a x) recomputed from its formula.
  PhiSum naive_literal(const MatCoefQuery& q) const;
  /// Same as naive() but summing x modulo p^{x_level + extra}.
  PhiSum naive_at_level(const MatCoefQuery& q, int extra) const;

  std::complex<double> value(const PhiSum& s) const;
  CycloRatio exact(const PhiSum& s) const;
  /// C0 sum (unnormalized) as a complex number.
  std::complex<double> c0() const { return c0_; }

 private:
  struct Table {
    i64 modulus = 0;
    i64 pw = 1;
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> hist;  // per residue y mod p^w
  };
  void validate(const MatCoefQuery& q) const;
  const Table& table(int i) const;
  PhiSum sum(const MatCoefQuery& q, int extra, bool literal) const;

  ReprSpec spec_;
  std::complex<double> c0_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const Table>> tables_;
  mutable std::map<i64, std::shared_ptr<const CycloValue>> c0_exact_;
};

/// Exact evaluation phiNaive(spec, q) as a numerator / C0 pair.
CycloRatio phiNaive(const PhiEvaluator& ev, const MatCoefQuery& q);

/// Support law for Phi^(i)(a, m): v(a) = 0 and v(m) = i - n when n0 < i < n-1;
/// v(a) = 0 and v(m) >= -1 when i is n-1 or n.  m = 0 counts as v(m) = +inf.
bool in_support(const ReprSpec& spec, int i, const PAdicScalar& a, const PAdicScalar& m);

struct GridPoint {
  int v_a = 0;
  i64 a_unit = 1;
  bool m_zero = false;
  int v_m = 0;
  i64 m_unit = 1;
};

/// v(a) in {-1..2}, v(m) in {i-n-2..1} plus m = 0, unit parts sampled so
/// that the grid holds at least min_points points.
std::vector<GridPoint> support_grid(const ReprSpec& spec, int i, int min_points, std::uint64_t seed);
MatCoefQuery make_query(const ReprSpec& spec, int i, const GridPoint& g);

struct SupportRow {
  GridPoint point;
  bool expected_zero = false;
  bool exact_zero = false;
  bool violation = false;
  std::complex<double> value;
};

struct SupportReport {
  std::vector<SupportRow> rows;
  i64 violations = 0;
  i64 nonzero_outside = 0;  // same as violations, kept for the CSV
  double max_abs = 0.0;     // |Phi| over all evaluated points
};

SupportReport verifySupport(const PhiEvaluator& ev, int i, const std::vector<GridPoint>& grid);

struct DecayRow {
  GridPoint point;
  std::complex<double> value;
  double ratio = 0.0;  // |Phi| q^{(n-i)/2}
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double max_ratio = 0.0;
  double bound = 0.0;  // 2 q^2 (principal series) or q^3 (supercuspidal)
};

/// Samples supported points (v(a) = 0, v(m) = i - n) and records
/// |Phi^(i)(a, m)| q^{(n-i)/2}.  samples <= 0 means the full residue grid.
DecayReport verifyDecay(const PhiEvaluator& ev, int i, int samples, std::uint64_t seed);

/// Element of K*(1) = (O(1))^x stored as residues mod p^P, P = n1 + n.
struct KStarElement {
  i64 p = 3;
  int P = 1;
  i64 a = 1, b = 0, c = 0, d = 1;

  i64 modulus() const { return ipow(p, P); }
  /// min(v(b), v(c)), capped at P.
  int level() const;
  bool valid() const;
  KStarElement operator*(const KStarElement& o) const;
  KStarElement inverse() const;
  static KStarElement identity(i64 p, int P) { return {p, P, 1, 0, 0, 1}; }
};

/// Uniform element of K*(j) \ K*(j+1): a, d units, b, c in p^j, one of them
/// of valuation exactly j.
KStarElement sampleKStar(const ReprSpec& spec, int j, std::mt19937_64& rng);

struct KStarDecomposition {
  int i = 0;
  PAdicScalar a;
  PAdicScalar m;
};

/// Phi'(g) = Phi^(i)(a, m) via a(varpi^{-n1}) g a(varpi^{n1}) =
/// (y m'; 0 z) n_-(varpi^i) k0 with k0 in K0(p^n).
KStarDecomposition decomposeKStar(const KStarElement& g, const ReprSpec& spec);
PhiSum phiPrime(const PhiEvaluator& ev, const KStarElement& g);

struct GramReport {
  int samples = 0;
  int rank = 0;
  std::vector<double> singular_values;  // descending
  double hermitian_defect = 0.0;        // max |G - G^*|
  double min_eigenvalue = 0.0;          // relative to the largest
};

/// Numerical rank of [Phi'(g_s^{-1} g_t)] over sampled g in K*(1).
GramReport gramDimensionEstimate(const PhiEvaluator& ev, int samples, double tol, std::uint64_t seed);

}  // namespace newmc
