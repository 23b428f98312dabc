#pragma once

#include <span>
#include <string>

#include "biortho/core/bigfloat.hpp"

namespace biortho {

// A real number held as sign * exp(log_magnitude). Sign 0 denotes exact zero,
// whose log_magnitude is -inf.
class LogValue {
 public:
  LogValue();
  LogValue(BigFloat log_magnitude, int sign);

  static LogValue zero(Bits bits = BigFloat::kDefaultBits);
  static LogValue from_real(const BigFloat& x);
  static LogValue from_double(double x, Bits bits = BigFloat::kDefaultBits);
  // exp(log_magnitude) with positive sign.
  static LogValue from_log(const BigFloat& log_magnitude);
  static LogValue from_log(double log_magnitude, Bits bits = BigFloat::kDefaultBits);

  const BigFloat& log_magnitude() const { return log_; }
  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  Bits bits() const { return log_.bits(); }

  double log_double() const { return log_.to_double(); }
  BigFloat to_real(Bits bits) const;
  BigFloat to_real() const { return to_real(bits()); }
  double to_double() const;

  LogValue operator-() const { return {log_, -sign_}; }
  LogValue abs() const { return {log_, sign_ == 0 ? 0 : 1}; }
  LogValue sqrt() const;
  LogValue pow(const BigFloat& exponent) const;
  LogValue reciprocal() const;

  // Scientific notation of the value with 17 significant digits.
  std::string to_string(int significant_digits = 17) const;

 private:
  BigFloat log_;
  int sign_;
};

LogValue operator*(const LogValue& a, const LogValue& b);
LogValue operator/(const LogValue& a, const LogValue& b);
LogValue operator+(const LogValue& a, const LogValue& b);
LogValue operator-(const LogValue& a, const LogValue& b);

// Value comparison (not a comparison of the stored logs).
int compare(const LogValue& a, const LogValue& b);
inline bool operator<(const LogValue& a, const LogValue& b) { return compare(a, b) < 0; }
inline bool operator<=(const LogValue& a, const LogValue& b) { return compare(a, b) <= 0; }
inline bool operator>(const LogValue& a, const LogValue& b) { return compare(a, b) > 0; }
inline bool operator>=(const LogValue& a, const LogValue& b) { return compare(a, b) >= 0; }

// Sum of signed log-domain terms. The maximum magnitude is factored out and the
// terms are combined in a canonical order (descending magnitude, ties broken by
// sign), so the result does not depend on the input order.
LogValue log_sum(std::span<const LogValue> terms);

}  // namespace biortho
