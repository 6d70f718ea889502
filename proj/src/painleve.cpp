#include "cpat/painleve.hpp"

#include <utility>

#include "cpat/error.hpp"
#include "cpat/riccati.hpp"

namespace cpat {

PainleveParams PainleveParams::make(const Real& gamma, const Real& alpha, int N) {
  const Real pi = Real::pi(gamma.context());
  if (!(gamma > 0 && gamma < 2)) throw Error("painleve: gamma must lie in (0,2), got " + gamma.to_string(17));
  if (!(alpha > 0 && alpha < pi)) throw Error("painleve: alpha must lie in (0,pi), got " + alpha.to_string(17));
  if (N < 0) throw Error("painleve: N must be >= 0");
  return {gamma, alpha, N};
}

Real aux_S(const PQState& s, const Real& t) { return s.Q * s.Q - s.P + s.Q * (1 - s.P) * t; }

Real F_boundary(const Real& P, const Real& alpha) {
  if (P.sign() < 0) throw Error("F_boundary: P must be >= 0, got " + P.to_string(17));
  if (P >= 1) return Real(1L, P.context());
  const Real t = cos(alpha);
  const Real u = (1 - P) * t;
  return (sqrt(u * u + 4 * P) - u) / 2;
}

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::D0: return "D0";
    case Domain::Du: return "Du";
    case Domain::Dd: return "Dd";
    case Domain::Df: return "Df";
  }
  return "?";
}

bool in_D0(const PQState& s, const Real& alpha) {
  return s.P.sign() > 0 && s.Q.sign() >= 0 && s.Q <= F_boundary(s.P, alpha);
}

bool in_Du(const PQState& s, const Real& alpha) { return s.P.sign() > 0 && s.Q > F_boundary(s.P, alpha); }

bool in_Dd(const PQState& s, const Real&) { return s.Q.sign() < 0; }

bool in_Df(const PQState& s, const Real&) { return s.P.sign() <= 0 && s.Q.sign() >= 0; }

Domain classify(const PQState& s, const Real& alpha) {
  if (s.Q.sign() < 0) return Domain::Dd;
  if (s.P.sign() <= 0) return Domain::Df;
  return s.Q <= F_boundary(s.P, alpha) ? Domain::D0 : Domain::Du;
}

PQState painleve_step(const PQState& s, const PainleveParams& params) {
  const Real& P = s.P;
  const Real& Q = s.Q;
  const Real& g = params.gamma;
  const Real t = params.t();
  const long N = params.N;
  const long M = s.M;
  const Real eps16 = 16 * params.context().eps();

  const Real S = aux_S(s, t);
  const Real a = (1 + P) * (Q - P * t);
  const Real b = (1 + P) * (P - Q * t);
  const Real num_q = (N - M) * Q * a - (M + N) * P * S;
  const Real den_q = Q * ((M + N) * S - (M - N) * b);
  const Real scale_q = abs(Q) * (abs(S) * (M + N) + abs(b) * (M > N ? M - N : N - M));
  if (den_q.is_zero() || abs(den_q) <= eps16 * scale_q) {
    throw StepSingular("QPainleve denominator Q((M+N)S-(M-N)(1+P)(P-Qt)) vanishes at N=" + std::to_string(N) +
                       ", M=" + std::to_string(M));
  }
  Real Qn = num_q / den_q;

  const Real p_coef = 2 * (N + 1) - g;
  const Real qq_coef = 2 * (M + 1) - g;
  const Real den_p = p_coef * P + qq_coef * Q * Qn;
  const Real scale_p = abs(p_coef * P) + abs(qq_coef * Q * Qn);
  if (den_p.is_zero() || abs(den_p) <= eps16 * scale_p) {
    throw StepSingular("PPainleve denominator (2(N+1)-g)P+(2(M+1)-g)Q Q' vanishes at N=" + std::to_string(N) +
                       ", M=" + std::to_string(M));
  }
  Real Pn = ((2 * M + g) * P + (2 * N + g) * Q * Qn) / den_p;
  return {std::move(Pn), std::move(Qn), s.M + 1};
}

PQState shooting_start(const Real& q, const PainleveParams& params) {
  return {g_coeff(params.N, params.gamma), q, params.N + 1};
}

PainleveTrajectory painleve_trajectory(const Real& q, const PainleveParams& params, int M_max) {
  PainleveTrajectory out;
  PQState s = shooting_start(q, params);
  out.states.push_back(s);
  out.domains.push_back(classify(s, params.alpha));
  while (s.M < M_max) {
    try {
      s = painleve_step(s, params);
    } catch (const StepSingular&) {
      out.singular = true;
      break;
    }
    out.states.push_back(s);
    out.domains.push_back(classify(s, params.alpha));
  }
  return out;
}

int survival_depth(const Real& q, const PainleveParams& params, int M_max) {
  PQState s = shooting_start(q, params);
  if (!in_D0(s, params.alpha)) return params.N;
  while (s.M < M_max) {
    PQState next;
    try {
      next = painleve_step(s, params);
    } catch (const StepSingular&) {
      return s.M;
    }
    if (!in_D0(next, params.alpha)) return s.M;
    s = std::move(next);
  }
  return s.M;
}

namespace {

Real grid_point(const Real& lo, const Real& hi, int i, int count) { return lo + (hi - lo) * i / (count - 1); }

}  // namespace

std::vector<char> survival_scan(const Real& lo, const Real& hi, int count, const PainleveParams& params,
                                int M, Exec exec) {
  std::vector<char> flags(static_cast<std::size_t>(count), 0);
  if (exec == Exec::serial) {
    for (int i = 0; i < count; ++i) flags[i] = survival_depth(grid_point(lo, hi, i, count), params, M) >= M;
    return flags;
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    flags[i] = survival_depth(grid_point(lo, hi, i, count), params, M) >= M;
  }
  return flags;
}

namespace {

struct Run {
  int first = -1;
  int last = -2;
  int size() const { return last - first + 1; }
};

Run widest_run(const std::vector<char>& flags) {
  Run best;
  const int n = static_cast<int>(flags.size());
  for (int i = 0; i < n;) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && flags[j + 1]) ++j;
    if (j - i + 1 > best.size()) best = {i, j};
    i = j + 1;
  }
  return best;
}

ShootingResult shoot(const PainleveParams& params, int M_max, const Real& q_tol, const ShootingOptions& opt) {
  const PrecisionContext ctx = params.context();
  const Real eps = ctx.eps();
  ShootingResult res;
  Real lo(ctx);
  Real hi = F_boundary(g_coeff(params.N, params.gamma), params.alpha);
  res.q_lo = lo;
  res.q_hi = hi;
  res.M_reached = params.N + 1;
  res.width_by_M.push_back(hi - lo);

  for (int M = params.N + 2; M <= M_max; ++M) {
    int grid = opt.seed_grid;
    for (;;) {
      if (res.iterations >= opt.max_iterations) return res;
      ++res.iterations;
      const auto flags = survival_scan(lo, hi, grid, params, M, opt.exec);
      const Run run = widest_run(flags);
      if (run.first < 0) {
        if (grid * 4 <= opt.max_grid) {
          grid *= 4;
          continue;
        }
        throw BracketLost("separatrix_bisect: no surviving seed at M=" + std::to_string(M) + " (N=" +
                          std::to_string(params.N) + "); raise the mantissa width");
      }
      const Real s_lo = grid_point(lo, hi, run.first, grid);
      const Real s_hi = grid_point(lo, hi, run.last, grid);
      Real o_lo = run.first > 0 ? grid_point(lo, hi, run.first - 1, grid) : s_lo;
      Real o_hi = run.last < grid - 1 ? grid_point(lo, hi, run.last + 1, grid) : s_hi;
      const bool filled = run.size() >= grid - 2;
      const bool exhausted = o_hi - o_lo <= 4 * eps * max(abs(o_hi), Real(1L, ctx));
      lo = std::move(o_lo);
      hi = std::move(o_hi);
      grid = opt.seed_grid;
      if (filled || exhausted) {
        res.q_lo = s_lo;
        res.q_hi = s_hi;
        res.M_reached = M;
        res.width_by_M.push_back(hi - lo);
        break;
      }
    }
  }
  res.converged = res.q_hi - res.q_lo <= q_tol;
  return res;
}

}  // namespace

ShootingResult separatrix_bisect(const PainleveParams& params, int M_max, const Real& q_tol,
                                 ShootingOptions options) {
  if (M_max <= params.N) throw Error("separatrix_bisect: M_max must exceed N");
  if (options.seed_grid < 3) throw Error("separatrix_bisect: seed grid needs at least 3 points");
  if (params.gamma <= 1) return shoot(params, M_max, q_tol, options);

  // 1/R solves the same system with 2-γ, and maps 1/P, 1/Q into its D0.
  PainleveParams dual = params;
  dual.gamma = 2 - params.gamma;
  ShootingResult r = shoot(dual, M_max, Real(1L, params.context()), options);
  ShootingResult out;
  if (r.q_lo.is_zero()) throw BracketLost("separatrix_bisect: dual bracket reaches Q = 0");
  out.q_lo = 1 / r.q_hi;
  out.q_hi = 1 / r.q_lo;
  out.M_reached = r.M_reached;
  out.iterations = r.iterations;
  out.dual = true;
  out.width_by_M = std::move(r.width_by_M);
  out.converged = out.q_hi - out.q_lo <= q_tol;
  return out;
}

DpiiStep dpii_step(const Complex& x_prev, const Complex& x_cur, int n, const Real& gamma, const Real& alpha) {
  const PrecisionContext ctx = x_cur.context();
  const Real unit_tol(1e-6, ctx);
  if (abs(abs(x_cur) - 1) > unit_tol || (n > 0 && abs(abs(x_prev) - 1) > unit_tol)) {
    throw Error("dpii_step: arguments must lie on the unit circle");
  }
  const Real eps16 = 16 * ctx.eps();
  const Complex e = Complex::unit(alpha);
  const Complex e2 = e * e;
  const Complex one(Real(1L, ctx), Real(ctx));
  const Complex xx = x_cur * x_cur;

  Complex rhs = x_cur * gamma * (e2 - one) / (e2 * 2L);
  if (n > 0) {
    const Complex den = e + x_prev * x_cur;
    if (abs(den) <= eps16) throw StepSingular("dPII: eps + x_{n-1} x_n vanishes at n=" + std::to_string(n));
    rhs += (one - xx / e2) * (x_prev + e * x_cur) / den * static_cast<long>(n);
  }
  const Complex k_den = (xx - one) * static_cast<long>(n + 1);
  if (abs(k_den) <= eps16) throw StepSingular("dPII: x_n^2 - 1 vanishes at n=" + std::to_string(n));
  const Complex K = rhs / k_den;
  const Complex den = one - K * x_cur;
  if (abs(den) <= eps16 * (1 + abs(K))) {
    throw StepSingular("dPII: coefficient 1 - K x_n of x_{n+1} vanishes at n=" + std::to_string(n));
  }
  Complex next = (K * e - x_cur / e) / den;
  const Real r = abs(next);
  return {next / r, abs(r - 1)};
}

DpiiTrajectory dpii_trajectory(const Real& gamma, const Real& alpha, int n_max) {
  DpiiTrajectory out;
  out.x.push_back(Complex::unit(gamma * alpha / 2));
  for (int n = 0; n < n_max; ++n) {
    const Complex& prev = n > 0 ? out.x[static_cast<std::size_t>(n) - 1] : out.x[0];
    DpiiStep step = dpii_step(prev, out.x.back(), n, gamma, alpha);
    out.x.push_back(std::move(step.x_next));
    out.drift.push_back(std::move(step.drift));
  }
  return out;
}

}  // namespace cpat
