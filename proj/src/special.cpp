#include "cpat/special.hpp"

#include <algorithm>
#include <string>

#include "cpat/error.hpp"

namespace cpat {

namespace {

constexpr int kGuardBits = 64;

PrecisionContext guarded(const Real& x) { return PrecisionContext(x.bits() + kGuardBits); }

bool near_nonpositive_integer(const Real& x, const Real& eps) {
  if (x > Real(0.5, x.context())) return false;
  Real scale = max(Real(1L, x.context()), abs(x));
  return distance_to_integer(x) < 10 * eps * scale;
}

Real log_abs_gamma(const Real& x, int& sign) { return lgamma(x, &sign); }

// Shared driver for F and its term-wise derivative. With derivative=true the
// k-th term is k·t_k z^{k-1}, i.e. (a)_k (b)_k / ((c)_k (k-1)!) z^{k-1}.
SeriesValue sum_series(const HypergeometricParams& p, bool derivative) {
  const PrecisionContext work = guarded(p.z);
  const Real eps_out = p.z.context().eps();
  const Real tol = (p.tol.is_zero() ? eps_out : p.tol).rounded_to(work);
  const Real a = p.a.rounded_to(work);
  const Real b = p.b.rounded_to(work);
  const Real c = p.c.rounded_to(work);
  const Real z = p.z.rounded_to(work);

  // (c)_k vanishes only if c is a non-positive integer reachable within the budget.
  if (near_nonpositive_integer(c, eps_out) && -c.to_double() < static_cast<double>(p.max_terms)) {
    throw PoleError("hyp2f1: c = " + c.to_string(17) + " is a non-positive integer");
  }

  // t_k = (a)_k (b)_k / ((c)_k k!) z^k; derivative term d_k = k t_k / z, so
  // d_1 = ab/c and d_{k+1} = d_k (a+k)(b+k) z / ((c+k) k).
  Real term(1L, work);
  Real sum(derivative ? 0L : 1L, work);
  long k = 0;
  if (derivative) {
    term = a * b / c;
    sum = term;
    k = 1;
  }
  // Terms may shrink before growing while c+k < 0, so tail tests only start
  // once c+k > 0 and the term ratio has settled below one.
  const double c_threshold = -c.to_double();
  SeriesValue out;
  for (; k < p.max_terms; ++k) {
    if (term.is_zero()) {
      out.converged = true;
      break;
    }
    const long kk = derivative ? k : k + 1;
    Real ratio = (a + k) * (b + k) * z / ((c + k) * kk);
    term *= ratio;
    sum += term;
    if (static_cast<double>(k) > c_threshold + 1) {
      Real r = abs(ratio);
      if (r < Real(1L, work)) {
        Real tail = abs(term) * r / (1 - r);
        if (tail <= tol * abs(sum)) {
          out.converged = true;
          ++k;
          break;
        }
      }
    }
  }
  out.value = sum.rounded_to(p.z.context());
  out.terms = k;
  return out;
}

}  // namespace

Real gamma_ratio(const GammaRatioQuery& q) {
  const Real eps = q.x.context().eps();
  const Real xm = q.x + q.m;
  if (near_nonpositive_integer(q.x, eps) || near_nonpositive_integer(xm, eps)) {
    throw PoleError("gamma_ratio: Gamma argument at a pole (x=" + q.x.to_string(17) +
                    ", x+m=" + xm.to_string(17) + ")");
  }
  const PrecisionContext work = guarded(q.x);
  int s1 = 1;
  int s2 = 1;
  Real lnum = log_abs_gamma(q.x.rounded_to(work) + q.m.rounded_to(work), s1);
  Real lden = log_abs_gamma(q.x.rounded_to(work), s2);
  Real r = exp(lnum - lden);
  if (s1 * s2 < 0) r = -r;
  return r.rounded_to(PrecisionContext(std::max(q.x.bits(), q.m.bits())));
}

SeriesValue hyp2f1_series(const HypergeometricParams& p) { return sum_series(p, false); }

SeriesValue hyp2f1_derivative_series(const HypergeometricParams& p) { return sum_series(p, true); }

Real hyp2f1(const HypergeometricParams& p) {
  SeriesValue v = hyp2f1_series(p);
  if (!v.converged) {
    throw NoConvergence("hyp2f1: no convergence after " + std::to_string(v.terms) + " terms (z=" +
                        p.z.to_string(17) + ")");
  }
  return v.value;
}

Real hyp2f1_derivative(const HypergeometricParams& p) {
  SeriesValue v = hyp2f1_derivative_series(p);
  if (!v.converged) {
    throw NoConvergence("hyp2f1': no convergence after " + std::to_string(v.terms) + " terms");
  }
  return v.value;
}

namespace {

HypergeometricParams s_params(const Real& gamma, const Real& z) {
  const PrecisionContext ctx = z.context();
  HypergeometricParams p;
  p.a = (3 - gamma) / 2;
  p.b = (gamma - 1) / 2;
  p.c = Real(0.5, ctx);
  p.z = z;
  p.tol = Real(ctx);
  return p;
}

}  // namespace

Real s_series(const Real& gamma, const Real& z) { return hyp2f1(s_params(gamma, z)); }

Real s_series_derivative(const Real& gamma, const Real& z) { return hyp2f1_derivative(s_params(gamma, z)); }

Real stirling_gamma(const Real& x) {
  const Real two_pi = 2 * Real::pi(x.context());
  return sqrt(two_pi) * exp(-x) * pow(x, x - Real(0.5, x.context()));
}

}  // namespace cpat
