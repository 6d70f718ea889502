#include "cpat/lattice.hpp"

#include "cpat/error.hpp"

namespace cpat {

std::optional<SublatticeIndex> to_sublattice(LatticeIndex idx) {
  if (!idx.is_center()) return std::nullopt;
  return SublatticeIndex{(idx.n - idx.m) / 2, (idx.n + idx.m) / 2};
}

LatticeIndex to_lattice(SublatticeIndex z) { return {z.N + z.M, z.M - z.N}; }

namespace {

Real scale_of(std::initializer_list<const Complex*> zs) {
  Real s = max_magnitude(zs);
  if (s.is_zero()) s = Real(1L, s.context());
  return s;
}

}  // namespace

Complex cross_ratio(const Complex& f1, const Complex& f2, const Complex& f3, const Complex& f4) {
  const Real threshold = f1.context().eps() * scale_of({&f1, &f2, &f3, &f4});
  Complex d23 = f2 - f3;
  Complex d41 = f4 - f1;
  if (abs(d23) < threshold) throw DegenerateQuad("cross_ratio: f2 == f3");
  if (abs(d41) < threshold) throw DegenerateQuad("cross_ratio: f4 == f1");
  return (f1 - f2) * (f3 - f4) / (d23 * d41);
}

Complex solve_fourth_point(const Complex& f1, const Complex& f2, const Complex& f4, const Complex& lambda) {
  const Real scale = scale_of({&f1, &f2, &f4});
  const Real threshold = f1.context().eps() * scale;
  Complex a = f1 - f2;
  Complex b = f4 - f1;
  if (abs(a) < threshold) throw DegenerateQuad("solve_fourth_point: f1 == f2");
  if (abs(b) < threshold) throw DegenerateQuad("solve_fourth_point: f4 == f1");
  Complex lb = lambda * b;
  Complex den = a + lb;
  if (abs(den) < threshold) throw DegenerateQuad("solve_fourth_point: vanishing solve denominator");
  return (a * f4 + lb * f2) / den;
}

}  // namespace cpat
