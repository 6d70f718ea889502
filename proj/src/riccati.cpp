#include "cpat/riccati.hpp"

#include "cpat/error.hpp"
#include "cpat/special.hpp"

namespace cpat {

RiccatiParams RiccatiParams::make(const Real& gamma, const Real& alpha) {
  const Real pi = Real::pi(gamma.context());
  if (!(gamma > 0 && gamma < 2)) throw Error("riccati: gamma must lie in (0,2), got " + gamma.to_string(17));
  if (!(alpha > 0 && alpha < pi)) throw Error("riccati: alpha must lie in (0,pi), got " + alpha.to_string(17));
  return {gamma, alpha, cos(alpha)};
}

Real g_coeff(long n, const Real& gamma) {
  Real den = 2 * (n + 1) - gamma;
  if (abs(den) < 10 * gamma.context().eps() * (2 * (n + 1))) {
    throw PoleError("g_coeff: pole at n=" + std::to_string(n) + ", gamma=" + gamma.to_string(17));
  }
  return (2 * n + gamma) / den;
}

RiccatiTrajectory riccati_iterate(const Real& p0, const RiccatiParams& params, long n_max,
                                  RiccatiOptions options) {
  RiccatiTrajectory traj;
  traj.params = params;
  traj.p.reserve(static_cast<std::size_t>(n_max) + 1);
  traj.p.push_back(p0);
  const Real eps = params.context().eps();
  const Real& t = params.t;
  for (long n = 0;; ++n) {
    const Real& p = traj.p.back();
    if (p.sign() <= 0 && traj.status == RiccatiStatus::all_positive) {
      traj.status = RiccatiStatus::left_positive;
      traj.exit_index = n;
      if (options.stop_at_sign_loss) break;
    }
    if (n == n_max) break;
    const Real g = g_coeff(n, params.gamma);
    Real den = p - t * g;
    if (abs(den) < eps * (1 + abs(p))) {
      traj.status = RiccatiStatus::pole_crossing;
      traj.exit_index = n;
      break;
    }
    traj.p.push_back((g - t * p) / den);
  }
  return traj;
}

Real riccati_residual(const RiccatiTrajectory& traj) {
  const Real& t = traj.params.t;
  Real worst(traj.params.context());
  for (std::size_t n = 0; n + 1 < traj.p.size(); ++n) {
    const Real g = g_coeff(static_cast<long>(n), traj.params.gamma);
    const Real& p = traj.p[n];
    const Real& q = traj.p[n + 1];
    Real r = abs(q * (p - t * g) - (g - t * p));
    Real scale = abs(q) * (abs(p) + abs(t * g)) + abs(g) + abs(t * p);
    worst = max(worst, r / scale);
  }
  return worst;
}

Real p0_closed(const RiccatiParams& params) {
  const Real& g = params.gamma;
  const Real& a = params.alpha;
  return sin(g * a / 2) / sin((2 - g) * a / 2);
}

Real p0_hypergeometric(const RiccatiParams& params) {
  const PrecisionContext ctx = params.context();
  const Real& g = params.gamma;
  const Real w = (1 - params.t) / 2;
  HypergeometricParams hp;
  hp.a = (3 - g) / 2;
  hp.b = (g - 1) / 2;
  hp.c = Real(1.5, ctx);
  hp.z = w;
  hp.tol = Real(ctx);
  const Real s = hyp2f1(hp);
  const Real ds = hyp2f1_derivative(hp);
  return (g + 2 * (1 - g) * w + 4 * w * (1 - w) * ds / s) / (2 - g);
}

namespace {

// (1 ± t)^x F(a, b; c; w) for one basis member.
Real branch(const Real& base, const Real& x, const Real& a, const Real& b, const Real& c, const Real& w) {
  HypergeometricParams hp;
  hp.a = a;
  hp.b = b;
  hp.c = c;
  hp.z = w;
  hp.tol = Real(w.context());
  return pow(base, x) * hyp2f1(hp);
}

}  // namespace

LinearSolution linear_solution(const Real& c1, const Real& c2, const RiccatiParams& params, long n_max,
                               LinearBasis basis) {
  const PrecisionContext ctx = params.context();
  const Real& g = params.gamma;
  const Real& t = params.t;
  const Real a = (3 - g) / 2;
  const Real b = (g - 1) / 2;
  const Real half(0.5, ctx);
  const Real lo = (1 - t) / 2;
  const Real hi = (1 + t) / 2;

  LinearSolution sol{c1, c2, {}, params, basis};
  sol.y.reserve(static_cast<std::size_t>(n_max) + 2);
  for (long n = 0; n <= n_max + 1; ++n) {
    const Real x = n + 1 - g / 2;
    const Real nr(n, ctx);
    Real pre(ctx);
    Real c(ctx);
    Real w1(ctx);
    Real w2(ctx);
    if (basis == LinearBasis::ascending) {
      pre = x / gamma_ratio(nr + g / 2, (3 - g) / 2);
      c = nr + Real(1.5, ctx);
      w1 = hi;
      w2 = lo;
    } else {
      pre = gamma_ratio(x, g / 2 - half);
      c = half - nr;
      w1 = lo;
      w2 = hi;
    }
    Real y(ctx);
    if (!c1.is_zero()) {
      Real v = c1 * branch(1 + t, x, a, b, c, w1);
      y += (n % 2 == 0) ? v : -v;
    }
    if (!c2.is_zero()) y += c2 * branch(1 - t, x, a, b, c, w2);
    sol.y.push_back(pre * y);
  }
  return sol;
}

Real linear_residual(const LinearSolution& sol) {
  const Real& t = sol.params.t;
  const Real& gam = sol.params.gamma;
  Real worst(sol.params.context());
  for (std::size_t n = 0; n + 2 < sol.y.size(); ++n) {
    const long k = static_cast<long>(n);
    const Real& y0 = sol.y[n];
    const Real& y1 = sol.y[n + 1];
    const Real& y2 = sol.y[n + 2];
    Real r = abs(y2 + t * (g_coeff(k + 1, gam) + 1) * y1 + (t * t - 1) * g_coeff(k, gam) * y0);
    Real scale = max(abs(y0), max(abs(y1), abs(y2)));
    if (!scale.is_zero()) worst = max(worst, r / scale);
  }
  return worst;
}

std::vector<Real> ansatz_riccati(const LinearSolution& sol) {
  std::vector<Real> p;
  if (sol.y.size() < 2) return p;
  p.reserve(sol.y.size() - 1);
  for (std::size_t n = 0; n + 1 < sol.y.size(); ++n) {
    if (sol.y[n].is_zero()) throw PoleError("ansatz_riccati: y_n vanishes at n=" + std::to_string(n));
    p.push_back(sol.y[n + 1] / sol.y[n] + sol.params.t * g_coeff(static_cast<long>(n), sol.params.gamma));
  }
  return p;
}

long positivity_horizon(const Real& delta, const RiccatiParams& params, long n_max) {
  RiccatiTrajectory traj = riccati_iterate(p0_closed(params) + delta, params, n_max);
  switch (traj.status) {
    case RiccatiStatus::left_positive:
      return traj.exit_index;
    case RiccatiStatus::pole_crossing:
      return traj.exit_index + 1;
    case RiccatiStatus::all_positive:
      break;
  }
  return n_max + 1;
}

}  // namespace cpat
