#include "doctest.h"

#include <cmath>

#include "cpat/error.hpp"
#include "cpat/lattice.hpp"
#include "cpat/riccati.hpp"
#include "support.hpp"

using namespace cpat;
using cpat::test::Gen;
using cpat::test::pi_times;
using cpat::test::rel_diff;

namespace {

RiccatiParams make(double gamma, double alpha_pi, int bits) {
  const auto ctx = PrecisionContext(bits);
  return RiccatiParams::make(Real(gamma, ctx), pi_times(alpha_pi, ctx));
}

}  // namespace

TEST_CASE("g_coeff") {
  const auto ctx = PrecisionContext(106);
  CHECK(g_coeff(0, Real(1L, ctx)) == 1L);
  for (double g : {0.25, 0.5, 1.5, 1.9}) {
    const Real gam(g, ctx);
    CHECK(rel_diff(g_coeff(0, gam), gam / (2 - gam)) < 1e-30);
    for (long n = 1; n < 5000; n += 37) CHECK(std::abs(g_coeff(n, gam).to_double() - 1) <= 1.0 / n);
  }
  CHECK_THROWS_AS(g_coeff(0, Real(2L, ctx)), PoleError);
}

TEST_CASE("params validation") {
  const auto ctx = PrecisionContext(53);
  CHECK_THROWS_AS(RiccatiParams::make(Real(2L, ctx), Real(1L, ctx)), Error);
  CHECK_THROWS_AS(RiccatiParams::make(Real(0.5, ctx), Real(4L, ctx)), Error);
}

TEST_CASE("gamma = 1 keeps p = 1 fixed") {
  for (double a : {0.2, 0.5, 0.75}) {
    auto traj = riccati_iterate(Real(1L, PrecisionContext(106)), make(1.0, a, 106), 100);
    CHECK(traj.status == RiccatiStatus::all_positive);
    CHECK(traj.p.size() == 101);
    for (const auto& p : traj.p) REQUIRE(std::abs(p.to_double() - 1) < 1e-28);
  }
}

TEST_CASE("gamma = 1 perturbed off the fixed point drifts to -1") {
  const auto params = make(1.0, 0.25, 106);
  const Real p0 = Real(1L, params.context()) + Real(1e-6, params.context());
  auto traj = riccati_iterate(p0, params, 200, {.stop_at_sign_loss = false});
  REQUIRE(traj.status == RiccatiStatus::left_positive);
  CHECK(traj.exit_index < 100);
  CHECK(std::abs(traj.p.back().to_double() + 1) < 1e-6);
}

TEST_CASE("separatrix stays positive when t <= 0") {
  for (double a : {0.5, 2.0 / 3.0}) {
    const auto params = make(0.5, a, 256);
    auto traj = riccati_iterate(p0_closed(params), params, 200);
    CHECK(traj.status == RiccatiStatus::all_positive);
    CHECK(traj.p.size() == 201);
    CHECK(riccati_residual(traj).to_double() < 1e-70);
  }
}

TEST_CASE("p0_closed") {
  const auto ctx = PrecisionContext(106);
  CHECK(rel_diff(p0_closed(make(1.0, 0.3, 106)), Real(1L, ctx)) < 1e-30);
  CHECK(p0_closed(make(0.5, 0.5, 106)).to_double() == doctest::Approx(0.4142136).epsilon(1e-7));
  CHECK(rel_diff(p0_closed(make(0.5, 0.5, 106)), tan(Real::pi(ctx) / 8)) < 1e-30);
  for (double g : {0.3, 0.8, 1.6}) {
    const auto params = RiccatiParams::make(Real(g, ctx), Real(1e-4, ctx));
    CHECK(std::abs(p0_closed(params).to_double() - g / (2 - g)) < 1e-7);
  }
}

TEST_CASE("p0_hypergeometric agrees with p0_closed") {
  CHECK(rel_diff(p0_hypergeometric(make(1.0, 0.4, 106)), Real(1L, PrecisionContext(106))) < 1e-30);
  for (double g : {0.1, 0.5, 0.9, 1.3, 1.8}) {
    for (double a : {0.05, 0.25, 0.5, 0.7, 0.9}) {
      const auto params = make(g, a, 212);
      CHECK(rel_diff(p0_hypergeometric(params), p0_closed(params)) < 1e-55);
    }
  }
  // Small-angle end: w -> 0 gives γ/(2-γ).
  const auto ctx = PrecisionContext(106);
  const auto params = RiccatiParams::make(Real(0.5, ctx), Real(1e-4, ctx));
  CHECK(std::abs(p0_hypergeometric(params).to_double() - 1.0 / 3.0) < 1e-8);
}

TEST_CASE("linear_solution satisfies the three-term recurrence") {
  Gen gen(3);
  for (double g : {0.3, 1.5}) {
    for (double a : {0.25, 2.0 / 3.0}) {
      const auto params = make(g, a, 256);
      const auto ctx = params.context();
      for (auto basis : {LinearBasis::ascending, LinearBasis::descending}) {
        const Real c1(gen.uniform(-2, 2), ctx), c2(gen.uniform(-2, 2), ctx);
        auto sol = linear_solution(c1, c2, params, 50, basis);
        CHECK(sol.y.size() == 52);
        CHECK(linear_residual(sol).to_double() < 1e-20);
      }
    }
  }
}

TEST_CASE("recessive solution reproduces the separatrix") {
  for (double g : {0.3, 1.5}) {
    for (double a : {0.25, 0.5, 2.0 / 3.0}) {
      const auto params = make(g, a, 256);
      const auto ctx = params.context();
      auto sol = linear_solution(Real(ctx), Real(1L, ctx), params, 50);
      auto p = ansatz_riccati(sol);
      auto traj = riccati_iterate(p0_closed(params), params, 50);
      REQUIRE(traj.p.size() == 51);
      for (std::size_t n = 0; n <= 50; ++n) REQUIRE(rel_diff(p[n], traj.p[n]) < 1e-10);
    }
  }
}

TEST_CASE("descending basis with c1 = 0 is not the separatrix for t > 0") {
  const auto params = make(0.5, 0.25, 256);
  const auto ctx = params.context();
  auto sol = linear_solution(Real(ctx), Real(1L, ctx), params, 5, LinearBasis::descending);
  auto p = ansatz_riccati(sol);
  CHECK(rel_diff(p[0], p0_closed(params)) > 1e-3);
}

TEST_CASE("property: ansatz values solve the Riccati recursion") {
  Gen gen(17);
  for (int i = 0; i < 12; ++i) {
    const auto params = make(gen.uniform(0.1, 1.9), gen.uniform(0.05, 0.95), 212);
    const auto ctx = params.context();
    const Real c1(gen.uniform(-1, 1), ctx), c2(gen.uniform(-1, 1), ctx);
    auto sol = linear_solution(c1, c2, params, 30);
    RiccatiTrajectory traj;
    traj.params = params;
    traj.p = ansatz_riccati(sol);
    CHECK(riccati_residual(traj).to_double() < 1e3 * ctx.eps().to_double());
  }
}

TEST_CASE("linear solution follows its asymptotic form") {
  const auto params = make(0.5, 0.25, 212);
  const auto ctx = params.context();
  const Real c1(0.7, ctx), c2(1.3, ctx);
  auto sol = linear_solution(c1, c2, params, 400);
  const Real& t = params.t;
  double prev = 1.0;
  for (long n : {25L, 100L, 400L}) {
    const Real x = n + 1 - params.gamma / 2;
    Real lead = c1 * pow(1 + t, x) * (n % 2 == 0 ? 1 : -1) + c2 * pow(1 - t, x);
    Real ratio = sol.y[static_cast<std::size_t>(n)] / pow(x, (params.gamma - 1) / 2) / lead;
    double err = std::abs(ratio.to_double() - 1);
    CHECK(err < prev);
    CHECK(err < 2.0 / static_cast<double>(n));
    prev = err;
  }
}

TEST_CASE("property: Riccati steps preserve cross-ratios") {
  for (double a : {0.5, 2.0 / 3.0}) {
    const auto params = make(0.5, a, 212);
    const auto ctx = params.context();
    std::vector<RiccatiTrajectory> trajs;
    for (double p0 : {0.3, 0.9, 1.7, 3.1}) trajs.push_back(riccati_iterate(Real(p0, ctx), params, 40));
    auto cr = [&](std::size_t n) {
      const Real &a1 = trajs[0].p[n], &a2 = trajs[1].p[n], &a3 = trajs[2].p[n], &a4 = trajs[3].p[n];
      return (a1 - a2) * (a3 - a4) / ((a2 - a3) * (a4 - a1));
    };
    const Real ref = cr(0);
    // Rounding accumulates linearly with the step count. For t < 0 the orbits
    // also contract onto each other, so the cross-ratio is only well
    // conditioned for the first few steps.
    const std::size_t steps = params.t.sign() < 0 ? 4 : 20;
    for (std::size_t n = 1; n <= steps; ++n) {
      INFO("n=", n, " t=", params.t.to_double());
      REQUIRE(rel_diff(cr(n), ref) < 1e3 * ctx.eps().to_double());
    }
  }
}

TEST_CASE("positivity_horizon") {
  const auto ctx = PrecisionContext(256);
  CHECK(positivity_horizon(Real(ctx), make(0.5, 0.5, 256), 200) == 201);
  const auto params = make(0.5, 0.25, 256);
  long last = 1000;
  for (double d : {1e-4, 1e-3, 1e-2}) {
    long h = positivity_horizon(Real(d, ctx), params, 200);
    CHECK(h <= 200);
    CHECK(h <= last);
    last = h;
  }
  const auto flat = make(0.5, 0.5, 256);
  CHECK(positivity_horizon(-p0_closed(flat) + Real(1e-9, ctx), flat, 200) == 201);
  CHECK(positivity_horizon(-p0_closed(params) + Real(1e-9, ctx), params, 200) <= 2);
}
