#pragma once

// Lattice index conventions and the cross-ratio primitive.
//
// The map f lives on the quadrant Z^2_+ with labels (n, m). Even-parity
// vertices (n+m even) are circle centers and carry complex sublattice labels
// z = N + iM with N = (n-m)/2, M = (n+m)/2.

#include <cstdlib>
#include <optional>

#include "cpat/real.hpp"

namespace cpat {

struct LatticeIndex {
  int n = 0;
  int m = 0;

  bool is_center() const { return (n + m) % 2 == 0; }
  friend constexpr bool operator==(LatticeIndex, LatticeIndex) = default;
};

struct SublatticeIndex {
  int N = 0;
  int M = 0;

  friend constexpr bool operator==(SublatticeIndex, SublatticeIndex) = default;
};

/// Only defined for even-parity (n, m).
std::optional<SublatticeIndex> to_sublattice(LatticeIndex idx);
LatticeIndex to_lattice(SublatticeIndex z);

/// V: M >= |N|.
constexpr bool in_V(SublatticeIndex z) { return z.M >= (z.N < 0 ? -z.N : z.N); }
/// V_l: V together with the points -N + i(N-1), N >= 1.
constexpr bool in_V_l(SublatticeIndex z) { return in_V(z) || (z.N <= -1 && z.M == -z.N - 1); }
/// V_rint: V without both diagonals +-N + iN.
constexpr bool in_V_rint(SublatticeIndex z) { return z.M > (z.N < 0 ? -z.N : z.N); }
/// V_int: points where z+1, z-i (and z) all lie in V; coincides with V_rint.
constexpr bool in_V_int(SublatticeIndex z) {
  return in_V_rint(z) && in_V({z.N + 1, z.M}) && in_V({z.N, z.M - 1});
}

/// q(f1,f2,f3,f4) = (f1-f2)(f3-f4) / ((f2-f3)(f4-f1)).
/// Throws DegenerateQuad when a denominator factor is below eps*scale,
/// scale being the largest input magnitude.
Complex cross_ratio(const Complex& f1, const Complex& f2, const Complex& f3, const Complex& f4);

/// The f3 with cross_ratio(f1, f2, f3, f4) == lambda.
Complex solve_fourth_point(const Complex& f1, const Complex& f2, const Complex& f4, const Complex& lambda);

}  // namespace cpat
