#pragma once

// Stationary-phase evaluation of Phi^(i)(a, m) for n0 < i < n-1: the double
// sum is split into balls x0 (1 + dx), u0 + du on which the phase is linear,
// only the critical balls survive, and each contributes its centre phase
// times the ball volume.

#include <chrono>
#include <vector>

#include "newmc/matcoef.hpp"

namespace newmc {

/// All u mod p^e with A u^2 + B u + C = 0 mod p^e, sorted.  p odd.
std::vector<i64> solveQuadraticCongruence(i64 A, i64 B, i64 C, i64 p, int e);
/// Same with integral p-adic coefficients.
std::vector<i64> solveQuadraticCongruence(const PAdicScalar& A, const PAdicScalar& B, const PAdicScalar& C, int e);
/// All z mod p^e with z^2 = d mod p^e, sorted.
std::vector<i64> sqrt_mod_prime_power(i64 d, i64 p, int e);

struct CriticalPair {
  i64 x0 = 0;       // unit residue mod p^{cx}
  i64 u0 = 0;       // principal series: unit residue mod p^{cu}
  ExtResidue w0;    // supercuspidal: shell residue at level h
  i64 phase = 0;    // exponent of the centre phase mod the sum modulus
};

struct FastResult {
  PhiSum sum;
  std::vector<CriticalPair> pairs;
  i64 candidates = 0;  // balls examined
  bool delegated = false;
};

/// refine > 0 shrinks both ball radii by that many steps.
FastResult phiFastPS(const PhiEvaluator& ev, const MatCoefQuery& q, int refine = 0);
FastResult phiFastSC(const PhiEvaluator& ev, const MatCoefQuery& q, int refine = 0);
/// Dispatch on the family; i in {n-1, n} goes to the naive sum.
FastResult phiFast(const PhiEvaluator& ev, const MatCoefQuery& q);

struct SpeedupRow {
  GridPoint point;
  double naive_seconds = 0.0;
  double literal_seconds = 0.0;
  double fast_seconds = 0.0;
  i64 naive_terms = 0;
  i64 fast_pairs = 0;
  double deviation = 0.0;  // |fast - naive| / max(|naive|, 1e-300), 0 when both vanish
  bool zero_pattern_match = true;
};

struct SpeedupReport {
  std::vector<SpeedupRow> rows;
  double naive_seconds = 0.0;
  double literal_seconds = 0.0;
  double fast_seconds = 0.0;
  double max_deviation = 0.0;
  i64 max_pairs = 0;
  i64 zero_mismatches = 0;
  double speedup() const { return fast_seconds > 0 ? naive_seconds / fast_seconds : 0.0; }
  double literal_speedup() const { return fast_seconds > 0 ? literal_seconds / fast_seconds : 0.0; }
};

/// Times both engines on every supported point of grid (n0 < i < n-1).
/// with_literal also times the formula-by-formula naive sum.
SpeedupReport speedupReport(const PhiEvaluator& ev, int i, const std::vector<GridPoint>& grid, bool with_literal = true);

}  // namespace newmc
