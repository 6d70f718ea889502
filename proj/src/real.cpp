#include "cpat/real.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace cpat {

PrecisionContext::PrecisionContext(int mantissa_bits) : bits_(mantissa_bits) {
  if (mantissa_bits < 53) {
    throw std::invalid_argument("mantissa_bits must be >= 53, got " + std::to_string(mantissa_bits));
  }
}

Real PrecisionContext::eps() const {
  Real e(1L, *this);
  mpfr_mul_2si(e.raw(), e.raw(), 1 - bits_, MPFR_RNDN);
  return e;
}

PrecisionContext PrecisionContext::for_grid(int n_max) {
  return PrecisionContext(n_max <= 16 ? 53 : 212);
}

// Real -----------------------------------------------------------------------

Real::Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

Real::Real() : Real(mpfr_prec_t{53}) { mpfr_set_zero(v_, 1); }

Real::Real(PrecisionContext ctx) : Real(mpfr_prec_t{ctx.bits()}) { mpfr_set_zero(v_, 1); }

Real::Real(double v, PrecisionContext ctx) : Real(mpfr_prec_t{ctx.bits()}) { mpfr_set_d(v_, v, MPFR_RNDN); }

Real::Real(long v, PrecisionContext ctx) : Real(mpfr_prec_t{ctx.bits()}) { mpfr_set_si(v_, v, MPFR_RNDN); }

Real::Real(const Real& o) : Real(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }

Real::Real(Real&& o) noexcept : Real(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::parse(std::string_view s, PrecisionContext ctx) {
  Real r(ctx);
  std::string buf(s);
  if (mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + buf + "'");
  }
  return r;
}

Real Real::pi(PrecisionContext ctx) {
  Real r(ctx);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::infinity(PrecisionContext ctx) {
  Real r(ctx);
  mpfr_set_inf(r.v_, 1);
  return r;
}

PrecisionContext Real::context() const {
  return PrecisionContext(static_cast<int>(std::max<mpfr_prec_t>(53, mpfr_get_prec(v_))));
}

Real Real::rounded_to(PrecisionContext ctx) const {
  Real r(ctx);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string Real::to_exact_string() const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return mpfr_signbit(v_) ? "-0" : "0";
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
  std::string d(digits);
  mpfr_free_str(digits);
  std::string out;
  if (!d.empty() && d[0] == '-') {
    out = "-";
    d.erase(0, 1);
  }
  while (d.size() > 1 && d.back() == '0') d.pop_back();
  // Value is 0.d × 10^e; moderate exponents print positionally.
  const long len = static_cast<long>(d.size());
  const long ex = static_cast<long>(e);
  if (ex > 0 && ex <= 21) {
    if (ex >= len) {
      out += d + std::string(static_cast<std::size_t>(ex - len), '0');
    } else {
      out += d.substr(0, static_cast<std::size_t>(ex)) + "." + d.substr(static_cast<std::size_t>(ex));
    }
  } else if (ex <= 0 && ex > -6) {
    out += "0." + std::string(static_cast<std::size_t>(-ex), '0') + d;
  } else {
    out += d.substr(0, 1);
    if (d.size() > 1) out += "." + d.substr(1);
    out += "e" + std::to_string(ex - 1);
  }
  return out;
}

std::string Real::to_string(int significant_digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", significant_digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

mpfr_prec_t Real::wider(const Real& a, const Real& b) {
  return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
}

Real& Real::operator+=(const Real& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(Real::wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(Real::wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(Real::wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(Real::wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(mpfr_get_prec(a.v_));
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real operator+(const Real& a, long b) {
  Real r(mpfr_get_prec(a.v_));
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(mpfr_get_prec(a.v_));
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator-(long a, const Real& b) {
  Real r(mpfr_get_prec(b.v_));
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(mpfr_get_prec(a.v_));
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(mpfr_get_prec(a.v_));
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator/(long a, const Real& b) {
  Real r(mpfr_get_prec(b.v_));
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (a.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(20); }

namespace {

template <typename F>
Real unary(const Real& x, F f) {
  Real r(x.context());
  r = x;  // carries x's precision even when it is below 53
  f(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real tan(const Real& x) { return unary(x, mpfr_tan); }
Real atan(const Real& x) { return unary(x, mpfr_atan); }
Real acos(const Real& x) { return unary(x, mpfr_acos); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real tgamma(const Real& x) { return unary(x, mpfr_gamma); }

Real atan2(const Real& y, const Real& x) {
  Real r = y.bits() >= x.bits() ? y : x;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r = x.bits() >= y.bits() ? x : y;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = x;
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real lgamma(const Real& x, int* sign_out) {
  Real r = x;
  int s = 1;
  mpfr_lgamma(r.raw(), &s, x.raw(), MPFR_RNDN);
  if (sign_out) *sign_out = s;
  return r;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real distance_to_integer(const Real& x) {
  Real r = x;
  mpfr_rint(r.raw(), x.raw(), MPFR_RNDN);
  return abs(x - r);
}

// Complex --------------------------------------------------------------------

Complex Complex::polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

Complex Complex::unit(const Real& theta) { return {cos(theta), sin(theta)}; }

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real re = re_ * o.re_ - im_ * o.im_;
  Real im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.re_ * o.re_ + o.im_ * o.im_;
  Real re = (re_ * o.re_ + im_ * o.im_) / d;
  Real im = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << "(" << z.re() << ", " << z.im() << ")";
}

Real abs(const Complex& z) {
  Real r = z.re().bits() >= z.im().bits() ? z.re() : z.im();
  mpfr_hypot(r.raw(), z.re().raw(), z.im().raw(), MPFR_RNDN);
  return r;
}

Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }

Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

Complex conj(const Complex& z) { return {z.re(), -z.im()}; }

Real max_magnitude(std::initializer_list<const Complex*> zs) {
  Real m;
  bool first = true;
  for (const Complex* z : zs) {
    Real a = max(abs(z->re()), abs(z->im()));
    if (first) {
      m = std::move(a);
      first = false;
    } else if (a > m) {
      m = std::move(a);
    }
  }
  return m;
}

}  // namespace cpat
