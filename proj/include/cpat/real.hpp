#pragma once

// MPFR-backed real and complex scalars with an explicit per-value mantissa
// width. Every value carries its own precision; binary operations round to
// the wider of the two operands, so a computation seeded from one
// PrecisionContext stays at that width throughout.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace cpat {

class Real;

/// Mantissa width shared by one run of the numerics.
class PrecisionContext {
public:
  constexpr PrecisionContext() = default;
  explicit PrecisionContext(int mantissa_bits);

  constexpr int bits() const { return bits_; }

  /// Unit roundoff 2^(1-bits).
  Real eps() const;

  /// Width used for exact sign decisions on products of two working values.
  constexpr PrecisionContext elevated() const { return PrecisionContext(2 * bits_ + 64, 0); }

  static PrecisionContext double_like() { return PrecisionContext(53); }
  /// 53 bits for grids with n+m <= 16, 212 bits beyond.
  static PrecisionContext for_grid(int n_max);

  friend constexpr bool operator==(PrecisionContext, PrecisionContext) = default;

private:
  constexpr PrecisionContext(int bits, int) : bits_(bits) {}
  int bits_ = 53;
};

class Real {
public:
  Real();
  explicit Real(PrecisionContext ctx);
  Real(double v, PrecisionContext ctx);
  Real(long v, PrecisionContext ctx);
  Real(int v, PrecisionContext ctx) : Real(static_cast<long>(v), ctx) {}

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  /// Parses a decimal (or "inf"/"-inf"/"nan") string, rounding to ctx.
  static Real parse(std::string_view s, PrecisionContext ctx);
  static Real pi(PrecisionContext ctx);
  static Real infinity(PrecisionContext ctx);

  PrecisionContext context() const;
  int bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
  Real rounded_to(PrecisionContext ctx) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Shortest decimal string that reads back bit-exactly at this precision.
  std::string to_exact_string() const;
  /// Decimal string with the given number of significant digits.
  std::string to_string(int significant_digits) const;

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);

  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator-(long a, const Real& b);
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator/(long a, const Real& b);
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator+(const Real& a, int b) { return a + static_cast<long>(b); }
  friend Real operator-(const Real& a, int b) { return a - static_cast<long>(b); }
  friend Real operator-(int a, const Real& b) { return static_cast<long>(a) - b; }
  friend Real operator*(const Real& a, int b) { return a * static_cast<long>(b); }
  friend Real operator/(const Real& a, int b) { return a / static_cast<long>(b); }
  friend Real operator/(int a, const Real& b) { return static_cast<long>(a) / b; }
  friend Real operator+(int a, const Real& b) { return b + static_cast<long>(a); }
  friend Real operator*(int a, const Real& b) { return b * static_cast<long>(a); }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0 && !a.is_nan(); }
  friend std::partial_ordering operator<=>(const Real& a, long b);
  friend bool operator==(const Real& a, int b) { return a == static_cast<long>(b); }
  friend std::partial_ordering operator<=>(const Real& a, int b) { return a <=> static_cast<long>(b); }

  friend std::ostream& operator<<(std::ostream& os, const Real& x);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

private:
  explicit Real(mpfr_prec_t prec);
  static mpfr_prec_t wider(const Real& a, const Real& b);

  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real atan(const Real& x);
Real atan2(const Real& y, const Real& x);
Real acos(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
/// log|Γ(x)|; sign_out receives the sign of Γ(x).
Real lgamma(const Real& x, int* sign_out = nullptr);
Real tgamma(const Real& x);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
/// Distance to the nearest integer.
Real distance_to_integer(const Real& x);

class Complex {
public:
  Complex() = default;
  explicit Complex(PrecisionContext ctx) : re_(ctx), im_(ctx) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(double re, double im, PrecisionContext ctx) : re_(re, ctx), im_(im, ctx) {}
  static Complex real(Real re) {
    Real im(re.context());
    return {std::move(re), std::move(im)};
  }
  /// r·e^{iθ}.
  static Complex polar(const Real& r, const Real& theta);
  /// e^{iθ}.
  static Complex unit(const Real& theta);

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  PrecisionContext context() const { return re_.context(); }
  Complex rounded_to(PrecisionContext ctx) const { return {re_.rounded_to(ctx), im_.rounded_to(ctx)}; }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re_ * s, a.im_ * s}; }
  friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
  friend Complex operator/(const Complex& a, const Real& s) { return {a.re_ / s, a.im_ / s}; }
  friend Complex operator*(const Complex& a, long s) { return {a.re_ * s, a.im_ * s}; }
  friend Complex operator/(const Complex& a, long s) { return {a.re_ / s, a.im_ / s}; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend std::ostream& operator<<(std::ostream& os, const Complex& z);

private:
  Real re_;
  Real im_;
};

Real abs(const Complex& z);
/// |z|^2.
Real norm(const Complex& z);
Real arg(const Complex& z);
Complex conj(const Complex& z);
/// Largest of |re|, |im| over the arguments; a cheap magnitude scale.
Real max_magnitude(std::initializer_list<const Complex*> zs);

using ComplexPoint = Complex;

}  // namespace cpat
