#pragma once

// Discrete Riccati recursion for the boundary radius ratio
//   p_{n+1} = (g_n - t p_n) / (p_n - t g_n),   t = cos α,
// its linearization p_n = y_{n+1}/y_n + t g_n and the closed forms of the
// unique initial value that keeps every p_n positive.

#include <vector>

#include "cpat/real.hpp"

namespace cpat {

struct RiccatiParams {
  Real gamma;
  Real alpha;
  Real t;

  /// Validates γ ∈ (0,2), α ∈ (0,π) and derives t = cos α.
  static RiccatiParams make(const Real& gamma, const Real& alpha);
  PrecisionContext context() const { return gamma.context(); }
};

/// g_n(γ) = (2n+γ)/(2n+2-γ). Throws PoleError when the denominator vanishes.
Real g_coeff(long n, const Real& gamma);

enum class RiccatiStatus {
  all_positive,   // every recorded p_n > 0
  left_positive,  // some p_n <= 0; exit_index is the first such n
  pole_crossing,  // p_n - t g_n vanished; exit_index is that n
};

struct RiccatiOptions {
  /// Stop at the first non-positive iterate. When false the iteration runs on
  /// through sign loss (useful to watch p_n approach -1); only a pole stops it.
  bool stop_at_sign_loss = true;
};

struct RiccatiTrajectory {
  std::vector<Real> p;
  RiccatiParams params;
  RiccatiStatus status = RiccatiStatus::all_positive;
  long exit_index = -1;
};

/// Iterates from p0 up to index n_max.
RiccatiTrajectory riccati_iterate(const Real& p0, const RiccatiParams& params, long n_max,
                                  RiccatiOptions options = {});

/// max_n |p_{n+1}(p_n - t g_n) - (g_n - t p_n)| relative to the term sizes.
Real riccati_residual(const RiccatiTrajectory& traj);

/// p0 = sin(γα/2) / sin((2-γ)α/2).
Real p0_closed(const RiccatiParams& params);

/// The same value through the hypergeometric series: with w = sin²(α/2) and
/// s̃(w) = F((3-γ)/2, (γ-1)/2; 3/2; w),
///   p0 = [γ + 2(1-γ)w + 4w(1-w) s̃'(w)/s̃(w)] / (2-γ).
Real p0_hypergeometric(const RiccatiParams& params);

/// Which hypergeometric pair spans the solutions of the linear recurrence.
enum class LinearBasis {
  /// F(a,b; n+3/2; w) with w = (1∓t)/2. The c1 = 0 solution is the recessive
  /// one, i.e. the separatrix.
  ascending,
  /// F(a,b; 1/2-n; w) with w = (1±t)/2. Terminating-index form; spans the
  /// same space but mixes the dominant solution into both members when t > 0.
  descending,
};

struct LinearSolution {
  Real c1;
  Real c2;
  std::vector<Real> y;
  RiccatiParams params;
  LinearBasis basis = LinearBasis::ascending;

  Real lambda1() const { return -params.t - 1; }
  Real lambda2() const { return 1 - params.t; }
};

/// y_n for n = 0..n_max+1 of
///   y_{n+2} + t(g_{n+1}+1) y_{n+1} + (t²-1) g_n y_n = 0.
/// With x = n+1-γ/2, a = (3-γ)/2, b = (γ-1)/2 the ascending basis is
///   y_n = x Γ(n+γ/2)/Γ(n+3/2) [c1 (-1)^n (1+t)^x F(a,b;n+3/2;(1+t)/2)
///                              + c2 (1-t)^x F(a,b;n+3/2;(1-t)/2)],
/// and the descending one
///   y_n = Γ(n+1/2)/Γ(x) [c1 (-1)^n (1+t)^x F(a,b;1/2-n;(1-t)/2)
///                        + c2 (1-t)^x F(a,b;1/2-n;(1+t)/2)].
/// The sign of λ1 = -(1+t) is folded into (-1)^n.
LinearSolution linear_solution(const Real& c1, const Real& c2, const RiccatiParams& params, long n_max,
                               LinearBasis basis = LinearBasis::ascending);

/// Largest residual of the linear recurrence over the recorded range, each
/// scaled by max(|y_n|, |y_{n+1}|, |y_{n+2}|).
Real linear_residual(const LinearSolution& sol);

/// p_n = y_{n+1}/y_n + t g_n for n = 0..n_max.
std::vector<Real> ansatz_riccati(const LinearSolution& sol);

/// Smallest n with p_n <= 0 when iterating from p0_closed + delta, or
/// n_max + 1 when positivity survives. A pole crossing at n counts as n + 1.
long positivity_horizon(const Real& delta, const RiccatiParams& params, long n_max);

}  // namespace cpat
