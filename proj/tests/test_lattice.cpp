#include "doctest.h"

#include "cpat/error.hpp"
#include "cpat/lattice.hpp"
#include "support.hpp"

using namespace cpat;
using cpat::test::Gen;

TEST_CASE("cross ratio of the unit square is -1") {
  const auto ctx = PrecisionContext(53);
  Complex q = cross_ratio(Complex(0, 0, ctx), Complex(1, 0, ctx), Complex(1, 1, ctx), Complex(0, 1, ctx));
  CHECK(q.re().to_double() == doctest::Approx(-1.0));
  CHECK(std::abs(q.im().to_double()) < 1e-15);
}

TEST_CASE("rhombus cross ratio is e^{-2i alpha}") {
  const auto ctx = PrecisionContext(212);
  for (double a : {0.1, 0.7, 1.2, 2.5, 3.0}) {
    const Real alpha(a, ctx);
    const Complex w = Complex::unit(alpha);
    const Complex one = Complex(1, 0, ctx);
    Complex q = cross_ratio(Complex(ctx), one, one + w, w);
    CHECK(abs(q - Complex::unit(-2 * alpha)).to_double() < 1e-60);
  }
}

TEST_CASE("cross ratio is Moebius invariant") {
  const auto ctx = PrecisionContext(106);
  Gen gen(7);
  for (int i = 0; i < 200; ++i) {
    Complex a = gen.complex(-2, 2, ctx), b = gen.complex(-2, 2, ctx);
    Complex c = gen.complex(-2, 2, ctx), d = gen.complex(-2, 2, ctx);
    if (abs(a * d - b * c) < Real(0.1, ctx)) continue;
    auto mob = [&](const Complex& z) { return (a * z + b) / (c * z + d); };
    const Complex pts[4] = {Complex(0, 0, ctx), Complex(1, 0, ctx), Complex(1, 1, ctx), Complex(0, 1, ctx)};
    bool near_pole = false;
    for (const auto& p : pts) near_pole = near_pole || abs(c * p + d) < Real(0.1, ctx);
    if (near_pole) continue;
    Complex q = cross_ratio(mob(pts[0]), mob(pts[1]), mob(pts[2]), mob(pts[3]));
    CHECK(abs(q + Complex(1, 0, ctx)).to_double() < 1e-25);
  }
}

TEST_CASE("degenerate quads are rejected") {
  const auto ctx = PrecisionContext(53);
  const Complex z(0, 0, ctx), one(1, 0, ctx);
  CHECK_THROWS_AS(cross_ratio(z, one, one, z + Complex(0, 1, ctx)), DegenerateQuad);
  CHECK_THROWS_AS(cross_ratio(z, one, Complex(1, 1, ctx), z), DegenerateQuad);
  CHECK_THROWS_AS(solve_fourth_point(z, z, one, one), DegenerateQuad);
  CHECK_THROWS_AS(solve_fourth_point(z, one, z, one), DegenerateQuad);
  // a + λb = 0 for f1=0, f2=1, f4=i, λ=-i.
  CHECK_THROWS_AS(solve_fourth_point(z, one, Complex(0, 1, ctx), Complex(0, -1, ctx)), DegenerateQuad);
}

TEST_CASE("solve_fourth_point examples") {
  const auto ctx = PrecisionContext(212);
  const Complex z(ctx), one(1, 0, ctx), i(0, 1, ctx);
  Complex f3 = solve_fourth_point(z, one, i, Complex(-1, 0, ctx));
  CHECK(abs(f3 - Complex(1, 1, ctx)).to_double() < 1e-60);
  const Real alpha(0.9, ctx);
  const Complex w = Complex::unit(alpha);
  f3 = solve_fourth_point(z, one, w, Complex::unit(-2 * alpha));
  CHECK(abs(f3 - (one + w)).to_double() < 1e-60);
}

TEST_CASE("property: cross_ratio inverts solve_fourth_point") {
  for (int b : {53, 212}) {
    const auto ctx = PrecisionContext(b);
    const double tol = 100 * ctx.eps().to_double();
    Gen gen(1000 + b);
    int tested = 0;
    while (tested < 10000) {
      Complex f1 = gen.complex(-1, 1, ctx), f2 = gen.complex(-1, 1, ctx), f4 = gen.complex(-1, 1, ctx);
      Complex lam = Complex::unit(Real(gen.uniform(0.1, 3.0), ctx)) * Real(gen.uniform(0.5, 2.0), ctx);
      if (abs(f1 - f2) < Real(0.2, ctx) || abs(f4 - f1) < Real(0.2, ctx)) continue;
      if (abs((f1 - f2) + lam * (f4 - f1)) < Real(0.2, ctx)) continue;
      Complex f3 = solve_fourth_point(f1, f2, f4, lam);
      if (abs(f2 - f3) < Real(0.2, ctx) || abs(f3 - f4) < Real(0.2, ctx)) continue;
      Complex q = cross_ratio(f1, f2, f3, f4);
      REQUIRE((abs(q - lam) / abs(lam)).to_double() < tol);
      ++tested;
    }
  }
}

TEST_CASE("property: sublattice labels are a bijection on even vertices") {
  for (int n = 0; n <= 1000; ++n) {
    for (int m = n % 2; m <= 1000; m += 2) {
      auto z = to_sublattice({n, m});
      REQUIRE(z.has_value());
      REQUIRE(to_lattice(*z) == LatticeIndex{n, m});
      REQUIRE(in_V(*z));
    }
  }
  CHECK_FALSE(to_sublattice({1, 0}).has_value());
}

TEST_CASE("property: region predicates nest") {
  for (int N = -30; N <= 30; ++N) {
    for (int M = -30; M <= 30; ++M) {
      SublatticeIndex z{N, M};
      if (in_V_rint(z)) REQUIRE(in_V(z));
      if (in_V(z)) REQUIRE(in_V_l(z));
      REQUIRE(in_V_int(z) == in_V_rint(z));
    }
  }
  CHECK(in_V_l({-1, 0}));
  CHECK_FALSE(in_V({-1, 0}));
  CHECK_FALSE(in_V_rint({2, 2}));
}
