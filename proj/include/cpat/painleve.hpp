#pragma once

// The (P, Q) dynamical system for radius ratios along a fixed column N,
//   P_{N,M} = R_{z+1}/R_{z-i},  Q_{N,M} = R_z/R_{z-i},  z = N + iM,
// its invariant domain D0, separatrix shooting and the unitary dPII map.

#include <string_view>
#include <vector>

#include "cpat/exec.hpp"
#include "cpat/real.hpp"

namespace cpat {

struct PainleveParams {
  Real gamma;
  Real alpha;
  int N = 0;

  static PainleveParams make(const Real& gamma, const Real& alpha, int N);
  Real t() const { return cos(alpha); }
  PrecisionContext context() const { return gamma.context(); }
};

struct PQState {
  Real P;
  Real Q;
  int M = 0;
};

/// S = Q² - P + Q(1-P)t.
Real aux_S(const PQState& s, const Real& t);

/// Nonnegative root of F² - P + F(1-P)cos α = 0 on [0,1], and 1 beyond.
Real F_boundary(const Real& P, const Real& alpha);

enum class Domain { D0, Du, Dd, Df };
std::string_view domain_name(Domain d);

bool in_D0(const PQState& s, const Real& alpha);
bool in_Du(const PQState& s, const Real& alpha);
bool in_Dd(const PQState& s, const Real& alpha);
bool in_Df(const PQState& s, const Real& alpha);
Domain classify(const PQState& s, const Real& alpha);

/// (P, Q) at M+1 from (P, Q) at M. Throws StepSingular naming the vanishing
/// denominator.
PQState painleve_step(const PQState& s, const PainleveParams& params);

/// Start of a shooting trajectory: P = g_N(γ), Q = q at M = N+1.
PQState shooting_start(const Real& q, const PainleveParams& params);

struct PainleveTrajectory {
  std::vector<PQState> states;
  std::vector<Domain> domains;
  bool singular = false;  // a step denominator degenerated after the last state
};

/// Steps from shooting_start(q) up to M_max; never throws on leaving D0.
PainleveTrajectory painleve_trajectory(const Real& q, const PainleveParams& params, int M_max);

/// Largest M' <= M_max such that the trajectory from q lies in D0 at every
/// M in [N+1, M']; N when the start itself is outside D0.
int survival_depth(const Real& q, const PainleveParams& params, int M_max);

struct ShootingOptions {
  int seed_grid = 64;
  int max_grid = 4096;     // densify up to this many points before giving up
  int max_iterations = 10000;
  Exec exec = Exec::parallel;
};

struct ShootingResult {
  Real q_lo;
  Real q_hi;
  int M_reached = 0;
  int iterations = 0;
  bool converged = false;  // q_hi - q_lo <= q_tol
  bool dual = false;       // γ > 1 was shot in the variables 1/P, 1/Q with 2-γ
  /// Outer bracket width once each M = N+1, N+2, ... was resolved. Outer
  /// brackets are nested, so the widths never increase.
  std::vector<Real> width_by_M;
};

/// Nested bisection for the initial Q whose trajectory stays in D0 for every
/// M <= M_max. The returned endpoints are both survivors. For γ > 1 the
/// reciprocal system with γ̃ = 2-γ is shot and the bracket mapped back by
/// q = 1/q̃. Throws BracketLost when no survivor can be found.
ShootingResult separatrix_bisect(const PainleveParams& params, int M_max, const Real& q_tol,
                                 ShootingOptions options = {});

/// Survival flags for the uniform grid lo + (hi-lo)·i/(count-1).
std::vector<char> survival_scan(const Real& lo, const Real& hi, int count, const PainleveParams& params,
                                int M, Exec exec);

struct DpiiStep {
  Complex x_next;
  Real drift;  // | |x_next| - 1 | before projection
};

/// One step of the unitary discrete Painlevé II map with ε = e^{iα}:
///   K = RHS_n / ((n+1)(x_n² - 1)),
///   RHS_n = γ x_n (ε²-1)/(2ε²) + n (1 - x_n²/ε²)(x_{n-1} + ε x_n)/(ε + x_{n-1} x_n),
///   x_{n+1} = (Kε - x_n/ε)/(1 - K x_n),
/// projected back to the unit circle.
DpiiStep dpii_step(const Complex& x_prev, const Complex& x_cur, int n, const Real& gamma, const Real& alpha);

struct DpiiTrajectory {
  std::vector<Complex> x;
  std::vector<Real> drift;  // drift[n] belongs to the step producing x[n+1]
};

/// Orbit from x_0 = e^{iγα/2} for n = 0..n_max.
DpiiTrajectory dpii_trajectory(const Real& gamma, const Real& alpha, int n_max);

}  // namespace cpat
