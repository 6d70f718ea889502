#pragma once

// Shared helpers for the unit and property tests.

#include <cstdint>
#include <random>

#include "cpat/real.hpp"

namespace cpat::test {

inline PrecisionContext bits(int b) { return PrecisionContext(b); }

inline Real num(double v, PrecisionContext ctx) { return Real(v, ctx); }

inline Real pi_times(double q, PrecisionContext ctx) { return Real::pi(ctx) * Real(q, ctx); }
/// p·π/q without rounding the fraction to double first.
inline Real pi_frac(long p, long q, PrecisionContext ctx) { return Real::pi(ctx) * p / q; }

/// Relative difference |a-b| / max(|a|,|b|,tiny).
inline double rel_diff(const Real& a, const Real& b) {
  Real s = max(abs(a), abs(b));
  if (s.is_zero()) return 0.0;
  return (abs(a - b) / s).to_double();
}

inline double abs_diff(const Complex& a, const Complex& b) { return abs(a - b).to_double(); }

/// Deterministic generator for hand-rolled property tests.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex complex(double lo, double hi, PrecisionContext ctx) {
    return Complex(uniform(lo, hi), uniform(lo, hi), ctx);
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace cpat::test
