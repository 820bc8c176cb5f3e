#pragma once

// Thin RAII layer over MPFR: a real type whose working precision is a
// per-thread setting, and a cartesian complex type on top of it.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace angelesco {

namespace detail {
inline mpfr_prec_t &tls_bits() {
  static thread_local mpfr_prec_t bits = 256;
  return bits;
}
} // namespace detail

inline long working_bits() { return static_cast<long>(detail::tls_bits()); }

// Sets the working precision of the calling thread for the guard's lifetime.
class PrecisionGuard {
public:
  explicit PrecisionGuard(long bits) : saved_(detail::tls_bits()) {
    if (bits < MPFR_PREC_MIN || bits > 1L << 24)
      throw DomainError("precision out of range: " + std::to_string(bits));
    detail::tls_bits() = static_cast<mpfr_prec_t>(bits);
  }
  ~PrecisionGuard() { detail::tls_bits() = saved_; }
  PrecisionGuard(const PrecisionGuard &) = delete;
  PrecisionGuard &operator=(const PrecisionGuard &) = delete;

private:
  mpfr_prec_t saved_;
};

class Real {
public:
  Real() {
    mpfr_init2(v_, detail::tls_bits());
    mpfr_set_zero(v_, 1);
  }
  Real(double d) {
    mpfr_init2(v_, detail::tls_bits());
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  template <std::signed_integral I> Real(I i) {
    mpfr_init2(v_, detail::tls_bits());
    mpfr_set_si(v_, static_cast<long>(i), MPFR_RNDN);
  }
  template <std::unsigned_integral I> Real(I i) {
    mpfr_init2(v_, detail::tls_bits());
    mpfr_set_ui(v_, static_cast<unsigned long>(i), MPFR_RNDN);
  }
  // decimal or "p/q"-free plain number text, rounded once to working precision
  explicit Real(std::string_view text) {
    mpfr_init2(v_, detail::tls_bits());
    std::string s(text);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(v_))
      throw DomainError("not a number: " + s);
  }
  Real(const Real &o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real &&o) noexcept {
    *v_ = *o.v_;
    o.v_->_mpfr_d = nullptr;
  }
  ~Real() {
    if (v_->_mpfr_d)
      mpfr_clear(v_);
  }
  Real &operator=(const Real &o) {
    if (this == &o)
      return *this;
    if (!v_->_mpfr_d)
      mpfr_init2(v_, mpfr_get_prec(o.v_));
    else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real &operator=(Real &&o) noexcept {
    std::swap(*v_, *o.v_);
    return *this;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  explicit operator double() const { return to_double(); }

  static Real pi() {
    Real r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real ldexp(long m, long e) {
    Real r(m);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  Real &operator+=(const Real &o) { return mpfr_add(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real &operator-=(const Real &o) { return mpfr_sub(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real &operator*=(const Real &o) { return mpfr_mul(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real &operator/=(const Real &o) { return mpfr_div(v_, v_, o.v_, MPFR_RNDN), *this; }
  Real &operator+=(double d) { return mpfr_add_d(v_, v_, d, MPFR_RNDN), *this; }
  Real &operator-=(double d) { return mpfr_sub_d(v_, v_, d, MPFR_RNDN), *this; }
  Real &operator*=(double d) { return mpfr_mul_d(v_, v_, d, MPFR_RNDN), *this; }
  Real &operator/=(double d) { return mpfr_div_d(v_, v_, d, MPFR_RNDN), *this; }
  template <std::integral I> Real &operator+=(I i) { return mpfr_add_si(v_, v_, long(i), MPFR_RNDN), *this; }
  template <std::integral I> Real &operator-=(I i) { return mpfr_sub_si(v_, v_, long(i), MPFR_RNDN), *this; }
  template <std::integral I> Real &operator*=(I i) { return mpfr_mul_si(v_, v_, long(i), MPFR_RNDN), *this; }
  template <std::integral I> Real &operator/=(I i) { return mpfr_div_si(v_, v_, long(i), MPFR_RNDN), *this; }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  std::string str(int digits) const {
    char *buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

private:
  mpfr_t v_;
};

inline Real operator+(Real a, const Real &b) { return a += b; }
inline Real operator-(Real a, const Real &b) { return a -= b; }
inline Real operator*(Real a, const Real &b) { return a *= b; }
inline Real operator/(Real a, const Real &b) { return a /= b; }
inline Real operator+(Real a, double b) { return a += b; }
inline Real operator-(Real a, double b) { return a -= b; }
inline Real operator*(Real a, double b) { return a *= b; }
inline Real operator/(Real a, double b) { return a /= b; }
inline Real operator+(double a, Real b) { return b += a; }
inline Real operator*(double a, Real b) { return b *= a; }
inline Real operator-(double a, const Real &b) {
  Real r;
  mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
inline Real operator/(double a, const Real &b) {
  Real r;
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
template <std::integral I> Real operator+(Real a, I b) { return a += b; }
template <std::integral I> Real operator-(Real a, I b) { return a -= b; }
template <std::integral I> Real operator*(Real a, I b) { return a *= b; }
template <std::integral I> Real operator/(Real a, I b) { return a /= b; }
template <std::integral I> Real operator+(I a, Real b) { return b += a; }
template <std::integral I> Real operator*(I a, Real b) { return b *= a; }
template <std::integral I> Real operator-(I a, const Real &b) {
  Real r;
  mpfr_si_sub(r.get(), long(a), b.get(), MPFR_RNDN);
  return r;
}
template <std::integral I> Real operator/(I a, const Real &b) {
  Real r;
  mpfr_si_div(r.get(), long(a), b.get(), MPFR_RNDN);
  return r;
}

inline bool operator<(const Real &a, const Real &b) { return mpfr_less_p(a.get(), b.get()); }
inline bool operator>(const Real &a, const Real &b) { return mpfr_greater_p(a.get(), b.get()); }
inline bool operator<=(const Real &a, const Real &b) { return mpfr_lessequal_p(a.get(), b.get()); }
inline bool operator>=(const Real &a, const Real &b) { return mpfr_greaterequal_p(a.get(), b.get()); }
inline bool operator==(const Real &a, const Real &b) { return mpfr_equal_p(a.get(), b.get()); }
inline bool operator!=(const Real &a, const Real &b) { return !mpfr_equal_p(a.get(), b.get()); }
inline int cmp(const Real &a, double d) { return mpfr_cmp_d(a.get(), d); }
inline bool operator<(const Real &a, double d) { return cmp(a, d) < 0; }
inline bool operator>(const Real &a, double d) { return cmp(a, d) > 0; }
inline bool operator<=(const Real &a, double d) { return cmp(a, d) <= 0; }
inline bool operator>=(const Real &a, double d) { return cmp(a, d) >= 0; }
inline bool operator==(const Real &a, double d) { return cmp(a, d) == 0; }
inline bool operator!=(const Real &a, double d) { return cmp(a, d) != 0; }
template <std::integral I> bool operator<(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) < 0; }
template <std::integral I> bool operator>(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) > 0; }
template <std::integral I> bool operator<=(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) <= 0; }
template <std::integral I> bool operator>=(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) >= 0; }
template <std::integral I> bool operator==(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) == 0; }
template <std::integral I> bool operator!=(const Real &a, I i) { return mpfr_cmp_si(a.get(), long(i)) != 0; }

inline std::ostream &operator<<(std::ostream &os, const Real &x) {
  return os << x.str(static_cast<int>(os.precision()));
}

#define ANGELESCO_UNARY(name, fn)                                              \
  inline Real name(const Real &x) {                                            \
    Real r;                                                                    \
    fn(r.get(), x.get(), MPFR_RNDN);                                           \
    return r;                                                                  \
  }
ANGELESCO_UNARY(sqrt, mpfr_sqrt)
ANGELESCO_UNARY(cbrt, mpfr_cbrt)
ANGELESCO_UNARY(exp, mpfr_exp)
ANGELESCO_UNARY(log, mpfr_log)
ANGELESCO_UNARY(log2, mpfr_log2)
ANGELESCO_UNARY(log10, mpfr_log10)
ANGELESCO_UNARY(log1p, mpfr_log1p)
ANGELESCO_UNARY(expm1, mpfr_expm1)
ANGELESCO_UNARY(sin, mpfr_sin)
ANGELESCO_UNARY(cos, mpfr_cos)
ANGELESCO_UNARY(tan, mpfr_tan)
ANGELESCO_UNARY(atan, mpfr_atan)
ANGELESCO_UNARY(abs, mpfr_abs)
ANGELESCO_UNARY(tgamma, mpfr_gamma)
#undef ANGELESCO_UNARY

inline Real floor(const Real &x) {
  Real r;
  mpfr_floor(r.get(), x.get());
  return r;
}
inline Real round(const Real &x) {
  Real r;
  mpfr_round(r.get(), x.get());
  return r;
}
inline Real lgamma_abs(const Real &x) {
  Real r;
  int sign = 0;
  mpfr_lgamma(r.get(), &sign, x.get(), MPFR_RNDN);
  return r;
}
inline Real atan2(const Real &y, const Real &x) {
  Real r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real &x, const Real &y) {
  Real r;
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real &x, const Real &y) {
  Real r;
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real &x, long n) {
  Real r;
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}
inline void sin_cos(const Real &x, Real &s, Real &c) { mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN); }
inline Real beta_fn(const Real &a, const Real &b) {
  Real r;
  mpfr_beta(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline bool isfinite(const Real &x) { return mpfr_number_p(x.get()) != 0; }
inline bool signbit(const Real &x) { return mpfr_signbit(x.get()) != 0; }
inline int sign(const Real &x) { return mpfr_sgn(x.get()); }
inline bool iszero(const Real &x) { return mpfr_zero_p(x.get()) != 0; }
inline Real max(const Real &a, const Real &b) { return a < b ? b : a; }
inline Real min(const Real &a, const Real &b) { return b < a ? b : a; }
// 2^e as a real
inline Real exp2i(long e) { return Real::ldexp(1, e); }
inline Real pi() { return Real::pi(); }

struct Complex {
  Real re, im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r) : re(r) {}
  Complex(double r, double i) : re(r), im(i) {}
  template <std::integral I> Complex(I r) : re(r) {}

  Complex &operator+=(const Complex &o) { return re += o.re, im += o.im, *this; }
  Complex &operator-=(const Complex &o) { return re -= o.re, im -= o.im, *this; }
  Complex &operator*=(const Complex &o) {
    Real r;
    mpfr_fmms(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
    mpfr_fmma(im.get(), re.get(), o.im.get(), im.get(), o.re.get(), MPFR_RNDN);
    re = std::move(r);
    return *this;
  }
  Complex &operator/=(const Complex &o) {
    Real d, r;
    mpfr_fmma(d.get(), o.re.get(), o.re.get(), o.im.get(), o.im.get(), MPFR_RNDN);
    mpfr_fmma(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
    mpfr_fmms(im.get(), im.get(), o.re.get(), re.get(), o.im.get(), MPFR_RNDN);
    re = std::move(r);
    re /= d;
    im /= d;
    return *this;
  }
  Complex &operator*=(const Real &s) { return re *= s, im *= s, *this; }
  Complex &operator/=(const Real &s) { return re /= s, im /= s, *this; }
  Complex &operator*=(double s) { return re *= s, im *= s, *this; }
  Complex &operator/=(double s) { return re /= s, im /= s, *this; }
  template <std::integral I> Complex &operator*=(I s) { return re *= s, im *= s, *this; }

  Complex operator-() const { return {-re, -im}; }
};

inline Complex operator+(Complex a, const Complex &b) { return a += b; }
inline Complex operator-(Complex a, const Complex &b) { return a -= b; }
inline Complex operator*(Complex a, const Complex &b) { return a *= b; }
inline Complex operator/(Complex a, const Complex &b) { return a /= b; }
inline Complex operator*(Complex a, const Real &b) { return a *= b; }
inline Complex operator*(const Real &b, Complex a) { return a *= b; }
inline Complex operator/(Complex a, const Real &b) { return a /= b; }
inline Complex operator+(Complex a, const Real &b) { return a.re += b, a; }
inline Complex operator-(Complex a, const Real &b) { return a.re -= b, a; }
inline Complex operator+(const Real &b, Complex a) { return a.re += b, a; }
inline Complex operator-(const Real &b, const Complex &a) { return {b - a.re, -a.im}; }
inline Complex operator*(Complex a, double b) { return a *= b; }
inline Complex operator*(double b, Complex a) { return a *= b; }
inline Complex operator/(Complex a, double b) { return a /= b; }
template <std::integral I> Complex operator*(Complex a, I b) { return a *= b; }
template <std::integral I> Complex operator*(I b, Complex a) { return a *= b; }

inline Complex conj(const Complex &z) { return {z.re, -z.im}; }
inline Real abs(const Complex &z) { return hypot(z.re, z.im); }
inline Real norm(const Complex &z) {
  Real r;
  mpfr_fmma(r.get(), z.re.get(), z.re.get(), z.im.get(), z.im.get(), MPFR_RNDN);
  return r;
}
inline Real arg(const Complex &z) { return atan2(z.im, z.re); }
inline Complex i_unit() { return {Real(0), Real(1)}; }

// e^{i theta}
inline Complex expi(const Real &theta) {
  Complex w;
  sin_cos(theta, w.im, w.re);
  return w;
}
inline Complex polar(const Real &r, const Real &theta) { return expi(theta) *= r; }
inline Complex exp(const Complex &z) { return expi(z.im) *= exp(z.re); }
inline Complex log(const Complex &z) { return {log(abs(z)), arg(z)}; }
// r^a e^{i a theta}: a real power with the argument supplied explicitly
inline Complex pow_lifted(const Real &r, const Real &theta, const Real &a) {
  return polar(exp(a * log(r)), a * theta);
}
inline Complex pow(const Complex &z, const Real &a) { return pow_lifted(abs(z), arg(z), a); }
inline Complex pow(const Complex &z, long n) {
  Complex r(1), b(z);
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (k) {
    if (k & 1)
      r *= b;
    b *= b;
    k >>= 1;
  }
  return n < 0 ? Complex(1) / r : r;
}
inline Complex sqrt(const Complex &z) { return pow_lifted(abs(z), arg(z), Real(0.5)); }
inline bool isfinite(const Complex &z) { return isfinite(z.re) && isfinite(z.im); }

inline std::ostream &operator<<(std::ostream &os, const Complex &z) {
  int d = static_cast<int>(os.precision());
  return os << '(' << z.re.str(d) << ',' << z.im.str(d) << ')';
}

// decimal digits that faithfully represent a value carried at `bits`
inline int digits_for_bits(long bits) {
  return static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120));
}

struct PrecisionContext {
  long bits = 256;
  Real quad_tol;
  long max_subdiv = 4000;

  PrecisionContext() : PrecisionContext(256, 1e-20) {}
  PrecisionContext(long b, double tol, long subdiv = 4000) : bits(b), max_subdiv(subdiv) {
    PrecisionGuard g(b);
    quad_tol = Real(tol);
    validate();
  }
  PrecisionContext(long b, const Real &tol, long subdiv = 4000) : bits(b), max_subdiv(subdiv) {
    PrecisionGuard g(b);
    quad_tol = tol;
    validate();
  }

  void validate() const {
    if (bits < 64)
      throw DomainError("precision below 64 bits");
    if (max_subdiv < 1)
      throw DomainError("max_subdiv must be positive");
    PrecisionGuard g(bits);
    if (!(quad_tol > 0))
      throw DomainError("quad_tol must be positive");
    if (quad_tol < exp2i(1 - bits) * 1000)
      throw DomainError("quad_tol " + quad_tol.str(6) + " not reachable at " + std::to_string(bits) + " bits");
  }
  PrecisionContext with_bits(long b) const { return PrecisionContext(b, quad_tol, max_subdiv); }
  PrecisionContext with_tol(double tol) const { return PrecisionContext(bits, tol, max_subdiv); }
};

// env override used by the command line front end
inline long default_bits_from_env(long fallback = 256) {
  const char *s = std::getenv("ANGELESCO_PREC_BITS");
  if (!s || !*s)
    return fallback;
  char *end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 64)
    throw DomainError(std::string("ANGELESCO_PREC_BITS must be an integer >= 64, got '") + s + "'");
  return v;
}

} // namespace angelesco
