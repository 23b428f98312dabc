#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace biortho {

using Bits = mpfr_prec_t;

// Decimal digits to binary precision, with a small guard.
Bits bits_for_digits(int digits);
int digits_for_bits(Bits bits);

// Owning MPFR real with an explicit precision. Binary operations produce a
// result at the larger of the operand precisions; there is no global default.
class BigFloat {
 public:
  static constexpr Bits kDefaultBits = 64;

  BigFloat() : BigFloat(kDefaultBits) {}
  explicit BigFloat(Bits bits);
  BigFloat(double value, Bits bits);
  BigFloat(long value, Bits bits);
  BigFloat(int value, Bits bits) : BigFloat(static_cast<long>(value), bits) {}
  BigFloat(const BigFloat& other, Bits bits);

  static BigFloat from_string(std::string_view text, Bits bits);
  static BigFloat pi(Bits bits);
  static BigFloat infinity(int sign, Bits bits);
  static BigFloat nan(Bits bits);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  BigFloat& operator=(double value);
  ~BigFloat();

  Bits bits() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  long to_long_floor() const { return mpfr_get_si(v_, MPFR_RNDD); }
  // Scientific notation with the requested number of significant digits.
  std::string to_string(int significant_digits) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat& operator+=(double rhs);
  BigFloat& operator-=(double rhs);
  BigFloat& operator*=(double rhs);
  BigFloat& operator/=(double rhs);
  BigFloat operator-() const;

  void swap(BigFloat& other) noexcept { mpfr_swap(v_, other.v_); }

 private:
  mpfr_t v_;
};

BigFloat operator+(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a, const BigFloat& b);
BigFloat operator*(const BigFloat& a, const BigFloat& b);
BigFloat operator/(const BigFloat& a, const BigFloat& b);
BigFloat operator+(const BigFloat& a, double b);
BigFloat operator-(const BigFloat& a, double b);
BigFloat operator*(const BigFloat& a, double b);
BigFloat operator/(const BigFloat& a, double b);
BigFloat operator+(double a, const BigFloat& b);
BigFloat operator-(double a, const BigFloat& b);
BigFloat operator*(double a, const BigFloat& b);
BigFloat operator/(double a, const BigFloat& b);

bool operator==(const BigFloat& a, const BigFloat& b);
std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
bool operator==(const BigFloat& a, double b);
std::partial_ordering operator<=>(const BigFloat& a, double b);

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat expm1(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat log1p(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat cosh(const BigFloat& x);
BigFloat sinh(const BigFloat& x);
BigFloat atan2(const BigFloat& y, const BigFloat& x);
BigFloat floor(const BigFloat& x);
BigFloat pow(const BigFloat& x, long n);
BigFloat pow(const BigFloat& x, const BigFloat& y);
// ln Gamma(x) for x > 0.
BigFloat lgamma(const BigFloat& x);
// ln n! at the requested precision.
BigFloat log_factorial(long n, Bits bits);
BigFloat zeta(unsigned long s, Bits bits);
BigFloat max(const BigFloat& a, const BigFloat& b);
BigFloat min(const BigFloat& a, const BigFloat& b);
void sin_cos(const BigFloat& x, BigFloat& s, BigFloat& c);

// Minimal complex arithmetic over BigFloat.
struct BigComplex {
  BigFloat re;
  BigFloat im;

  BigComplex() = default;
  explicit BigComplex(Bits bits) : re(bits), im(bits) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(double r, double i, Bits bits) : re(r, bits), im(i, bits) {}

  Bits bits() const { return re.bits() > im.bits() ? re.bits() : im.bits(); }
  BigFloat norm() const { return re * re + im * im; }
  BigFloat abs() const { return sqrt(norm()); }
  BigFloat arg() const { return atan2(im, re); }
  BigComplex conj() const { return {re, -im}; }

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator*=(const BigFloat& rhs);
};

BigComplex operator+(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigFloat& b);
BigComplex operator/(const BigComplex& a, const BigComplex& b);
BigComplex operator/(const BigComplex& a, const BigFloat& b);
// e^{i theta}
BigComplex expi(const BigFloat& theta);
BigComplex exp(const BigComplex& z);
BigComplex cos(const BigComplex& z);

}  // namespace biortho
