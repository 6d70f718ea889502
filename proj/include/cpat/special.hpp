#pragma once

// Gamma ratios, the truncated Gauss hypergeometric series and Stirling's
// approximation. All routines work at the precision of their arguments and
// use a few guard bits internally.

#include "cpat/real.hpp"

namespace cpat {

struct GammaRatioQuery {
  Real x;
  Real m;
};

struct HypergeometricParams {
  Real a;
  Real b;
  Real c;
  Real z;
  Real tol;  // relative tail tolerance; zero means the argument's eps
  long max_terms = 100000;
};

struct SeriesValue {
  Real value;
  bool converged = false;
  long terms = 0;
};

/// Γ(x+m)/Γ(x) from log-gamma differences. Throws PoleError when x or x+m
/// is within 10·eps of a non-positive integer.
Real gamma_ratio(const GammaRatioQuery& q);
inline Real gamma_ratio(const Real& x, const Real& m) { return gamma_ratio({x, m}); }

/// Partial sums of F(a,b;c;z) without throwing; `converged` reports whether
/// the tail estimate dropped below tol before max_terms.
SeriesValue hyp2f1_series(const HypergeometricParams& p);
/// Term-wise derivative d/dz F(a,b;c;z), same truncation rule.
SeriesValue hyp2f1_derivative_series(const HypergeometricParams& p);

/// F(a,b;c;z). Throws NoConvergence when max_terms is hit, PoleError when
/// (c)_k vanishes within the term budget.
Real hyp2f1(const HypergeometricParams& p);
Real hyp2f1_derivative(const HypergeometricParams& p);

/// s(z) = F((3-γ)/2, (γ-1)/2; 1/2; z).
Real s_series(const Real& gamma, const Real& z);
Real s_series_derivative(const Real& gamma, const Real& z);

/// √(2π) e^{-x} x^{x-1/2}.
Real stirling_gamma(const Real& x);

}  // namespace cpat
