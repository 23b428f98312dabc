#include "biortho/core/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biortho/core/errors.hpp"

namespace biortho {

namespace {

Bits max_bits(const BigFloat& a, const BigFloat& b) { return std::max(a.bits(), b.bits()); }

template <typename Fn>
BigFloat unary(const BigFloat& x, Fn fn) {
  BigFloat r(x.bits());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Bits bits_for_digits(int digits) {
  require(digits > 0, "digit count must be positive", ErrorKind::invalid_argument);
  return static_cast<Bits>(std::ceil(digits * 3.321928094887362)) + 16;
}

int digits_for_bits(Bits bits) { return static_cast<int>(std::floor((bits - 16) / 3.321928094887362)); }

BigFloat::BigFloat(Bits bits) {
  mpfr_init2(v_, std::max<Bits>(bits, MPFR_PREC_MIN));
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double value, Bits bits) : BigFloat(bits) { mpfr_set_d(v_, value, MPFR_RNDN); }

BigFloat::BigFloat(long value, Bits bits) : BigFloat(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }

BigFloat::BigFloat(const BigFloat& other, Bits bits) : BigFloat(bits) {
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat BigFloat::from_string(std::string_view text, Bits bits) {
  BigFloat r(bits);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    fail(ErrorKind::parse, "not a decimal number: '" + s + "'");
  }
  return r;
}

BigFloat BigFloat::pi(Bits bits) {
  BigFloat r(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::infinity(int sign, Bits bits) {
  BigFloat r(bits);
  mpfr_set_inf(r.v_, sign);
  return r;
}

BigFloat BigFloat::nan(Bits bits) {
  BigFloat r(bits);
  mpfr_set_nan(r.v_);
  return r;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, other.bits());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.bits());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat& BigFloat::operator=(double value) {
  mpfr_set_d(v_, value, MPFR_RNDN);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

std::string BigFloat::to_string(int significant_digits) const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", significant_digits - 1, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

#define BIORTHO_COMPOUND(op, fn)                                  \
  BigFloat& BigFloat::operator op(const BigFloat& rhs) {          \
    if (rhs.bits() > bits()) mpfr_prec_round(v_, rhs.bits(), MPFR_RNDN); \
    fn(v_, v_, rhs.v_, MPFR_RNDN);                                \
    return *this;                                                 \
  }                                                               \
  BigFloat& BigFloat::operator op(double rhs) {                   \
    fn##_d(v_, v_, rhs, MPFR_RNDN);                               \
    return *this;                                                 \
  }

BIORTHO_COMPOUND(+=, mpfr_add)
BIORTHO_COMPOUND(-=, mpfr_sub)
BIORTHO_COMPOUND(*=, mpfr_mul)
BIORTHO_COMPOUND(/=, mpfr_div)
#undef BIORTHO_COMPOUND

BigFloat BigFloat::operator-() const {
  BigFloat r(bits());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define BIORTHO_BINARY(op, fn)                                    \
  BigFloat operator op(const BigFloat& a, const BigFloat& b) {    \
    BigFloat r(max_bits(a, b));                                   \
    fn(r.get(), a.get(), b.get(), MPFR_RNDN);                     \
    return r;                                                     \
  }                                                               \
  BigFloat operator op(const BigFloat& a, double b) {             \
    BigFloat r(a.bits());                                         \
    fn##_d(r.get(), a.get(), b, MPFR_RNDN);                       \
    return r;                                                     \
  }

BIORTHO_BINARY(+, mpfr_add)
BIORTHO_BINARY(-, mpfr_sub)
BIORTHO_BINARY(*, mpfr_mul)
BIORTHO_BINARY(/, mpfr_div)
#undef BIORTHO_BINARY

BigFloat operator+(double a, const BigFloat& b) { return b + a; }
BigFloat operator*(double a, const BigFloat& b) { return b * a; }

BigFloat operator-(double a, const BigFloat& b) {
  BigFloat r(b.bits());
  mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

BigFloat operator/(double a, const BigFloat& b) {
  BigFloat r(b.bits());
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.get(), b.get());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const BigFloat& a, double b) { return !a.is_nan() && !std::isnan(b) && mpfr_cmp_d(a.get(), b) == 0; }

std::partial_ordering operator<=>(const BigFloat& a, double b) {
  if (a.is_nan() || std::isnan(b)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.get(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigFloat abs(const BigFloat& x) { return unary(x, mpfr_abs); }
BigFloat sqrt(const BigFloat& x) { return unary(x, mpfr_sqrt); }
BigFloat exp(const BigFloat& x) { return unary(x, mpfr_exp); }
BigFloat expm1(const BigFloat& x) { return unary(x, mpfr_expm1); }
BigFloat log(const BigFloat& x) { return unary(x, mpfr_log); }
BigFloat log1p(const BigFloat& x) { return unary(x, mpfr_log1p); }
BigFloat cos(const BigFloat& x) { return unary(x, mpfr_cos); }
BigFloat sin(const BigFloat& x) { return unary(x, mpfr_sin); }
BigFloat cosh(const BigFloat& x) { return unary(x, mpfr_cosh); }
BigFloat sinh(const BigFloat& x) { return unary(x, mpfr_sinh); }

BigFloat floor(const BigFloat& x) {
  BigFloat r(x.bits());
  mpfr_floor(r.get(), x.get());
  return r;
}

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat r(max_bits(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, long n) {
  BigFloat r(x.bits());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r(max_bits(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigFloat lgamma(const BigFloat& x) {
  require(x > 0.0, "lgamma requires a positive argument", ErrorKind::invalid_argument);
  return unary(x, mpfr_lngamma);
}

BigFloat log_factorial(long n, Bits bits) {
  require(n >= 0, "factorial of a negative integer", ErrorKind::invalid_argument);
  if (n < 2) return BigFloat(bits);
  return lgamma(BigFloat(n + 1, bits));
}

BigFloat zeta(unsigned long s, Bits bits) {
  BigFloat r(bits);
  mpfr_zeta_ui(r.get(), s, MPFR_RNDN);
  return r;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

void sin_cos(const BigFloat& x, BigFloat& s, BigFloat& c) {
  mpfr_set_prec(s.get(), x.bits());
  mpfr_set_prec(c.get(), x.bits());
  mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN);
}

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  BigFloat r = re * rhs.re - im * rhs.im;
  im = re * rhs.im + im * rhs.re;
  re = std::move(r);
  return *this;
}

BigComplex& BigComplex::operator*=(const BigFloat& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

BigComplex operator*(const BigComplex& a, const BigFloat& b) { return {a.re * b, a.im * b}; }

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  const BigFloat n = b.norm();
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

BigComplex operator/(const BigComplex& a, const BigFloat& b) { return {a.re / b, a.im / b}; }

BigComplex expi(const BigFloat& theta) {
  BigFloat s(theta.bits()), c(theta.bits());
  sin_cos(theta, s, c);
  return {std::move(c), std::move(s)};
}

BigComplex exp(const BigComplex& z) {
  BigComplex u = expi(z.im);
  const BigFloat m = exp(z.re);
  return u * m;
}

BigComplex cos(const BigComplex& z) {
  // cos(x+iy) = cos x cosh y - i sin x sinh y
  BigFloat s(z.bits()), c(z.bits());
  sin_cos(z.re, s, c);
  return {c * cosh(z.im), -(s * sinh(z.im))};
}

}  // namespace biortho
