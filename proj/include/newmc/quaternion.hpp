#pragma once

// Indefinite rational quaternion algebras (a, b) with a > 0, orders and
// sublattices, the real splitting, hyperbolic distance, and lattice-point
// counts {alpha in Lambda : nr(alpha) = m, u(z, alpha z) <= delta}.

#include <array>
#include <complex>
#include <map>
#include <vector>

#include "newmc/cyclo.hpp"

namespace newmc {

using Quat = std::array<Rational, 4>;  // x0 + x1 i + x2 j + x3 k

/// Hilbert symbol (a, b)_p; p = 0 stands for the real place.
int localHilbertSymbol(i64 a, i64 b, i64 p);

class QuaternionAlgebra {
 public:
  /// i^2 = a, j^2 = b, k = ij = -ji.  Requires a > 0 and b != 0.
  QuaternionAlgebra(i64 a, i64 b);

  i64 a() const { return a_; }
  i64 b() const { return b_; }
  /// Product of the finite primes where (a, b)_p = -1.
  i64 discriminant() const { return disc_; }
  std::vector<i64> ramified_primes() const { return ram_; }
  bool is_division() const { return disc_ != 1; }

  Quat mul(const Quat& x, const Quat& y) const;
  Rational nr(const Quat& x) const;
  Rational trd(const Quat& x) const { return 2 * x[0]; }
  Quat conj(const Quat& x) const { return {x[0], -x[1], -x[2], -x[3]}; }

  /// Integer versions on frame coordinates.
  i64 nr_int(const std::array<i64, 4>& x) const;

  /// iota_inf(x) = x0 + x1 diag(sqrt a, -sqrt a) + x2 (0 b; 1 0) + x3 iota(i) iota(j).
  std::array<double, 4> iota_inf(const std::array<double, 4>& x) const;

 private:
  i64 a_, b_;
  i64 disc_;
  std::vector<i64> ram_;
};

struct RationalOrder {
  std::array<Quat, 4> basis;
};

/// Coordinates of x in the order's basis, or throws if the basis is singular.
std::array<Rational, 4> order_coordinates(const RationalOrder& O, const Quat& x);
/// Throws std::invalid_argument unless O contains 1 and is closed under products.
void check_order(const QuaternionAlgebra& A, const RationalOrder& O);
/// sqrt |det trd(e_r e_s)|.
Rational reduced_discriminant(const QuaternionAlgebra& A, const RationalOrder& O);
/// True iff the reduced discriminant equals disc(A).
bool verifyMaximalOrder(const QuaternionAlgebra& A, const RationalOrder& O);

using IntMat4 = std::array<std::array<i64, 4>, 4>;

/// Row-style Hermite normal form of the lattice spanned by gens (full rank).
IntMat4 hermite_basis(const std::vector<std::array<i64, 4>>& gens);

struct TidyLattice {
  RationalOrder parent;
  IntMat4 basis;  // rows, in parent coordinates
  i64 N = 1;      // [parent : Lambda]
  std::array<i64, 3> shape{1, 1, 1};
};

/// M1 | M2 | M3 with M1 M2 M3 = N, from the Smith form of the basis.
std::array<i64, 3> lattice_shape(const IntMat4& basis);
bool is_tidy(const std::array<i64, 3>& shape);

/// Splitting iota_p: A (x) Z/p^R -> M2(Z/p^R) as images of i and j.
struct LocalSplitting {
  i64 p;
  int R;
  std::array<i64, 4> I;  // row-major 2x2
  std::array<i64, 4> J;
  std::array<i64, 4> image(const Quat& x) const;
};
LocalSplitting localSplitting(const QuaternionAlgebra& A, i64 p, int R);

/// Lambda with Lambda_p = iota_p^{-1}(o, p^r; p^r, o) for (p, r) in plan, O_p elsewhere.
TidyLattice buildTidyLattice(const QuaternionAlgebra& A, const RationalOrder& O, const std::map<i64, int>& plan);
/// Z + Z s + M O for s in O; index M^2 when 1, s are independent mod every p | M.
TidyLattice conductorLattice(const QuaternionAlgebra& A, const RationalOrder& O, const Quat& s, i64 M);
TidyLattice trivialLattice(const RationalOrder& O);
/// Lambda in parent coordinates contains Lambda2 (both with the same parent).
bool lattice_contains(const TidyLattice& big, const TidyLattice& small);

struct UpperHalfPoint {
  double x = 0.0;
  double y = 1.0;
};

double hyperbolic_u(const UpperHalfPoint& z1, const UpperHalfPoint& z2);
/// g z for a real 2x2 matrix with positive determinant, row-major.
UpperHalfPoint mobius(const std::array<double, 4>& g, const UpperHalfPoint& z);

enum class Enumerator { FinckePohst, Box };

struct CountTable {
  std::map<i64, i64> by_norm;  // m -> #{alpha : nr = m, u <= delta}
  i64 visited = 0;             // lattice vectors inside the ellipsoid
};

/// Counts for every norm in `norms`, enumerating Q_z(alpha) <= (4 delta + 2) max(norms).
CountTable countLatticePointsTable(const QuaternionAlgebra& A, const TidyLattice& L, const UpperHalfPoint& z,
                                   double delta, const std::vector<i64>& norms, Enumerator how = Enumerator::FinckePohst);
i64 countLatticePoints(const QuaternionAlgebra& A, const TidyLattice& L, const UpperHalfPoint& z, double delta,
                       i64 m, Enumerator how = Enumerator::FinckePohst);

/// Q_z(alpha) = |sigma_z^{-1} iota_inf(alpha) sigma_z|_F^2 with sigma_z i = z.
double q_form(const QuaternionAlgebra& A, const Quat& alpha, const UpperHalfPoint& z);

struct CountingRow {
  i64 N = 1;
  i64 L = 1;
  i64 sum_linear = 0;   // sum_{m <= L} count(m)
  i64 sum_square = 0;   // sum_{m <= L} count(m^2)
  double ratio_linear = 0.0;  // sum_linear / (L + L^2 / N)
  double ratio_square = 0.0;  // sum_square / (L + L^3 / N)
};

CountingRow countingBoundRow(const QuaternionAlgebra& A, const TidyLattice& Lam, const UpperHalfPoint& z, double delta,
                             i64 L, Enumerator how = Enumerator::FinckePohst);

}  // namespace newmc
