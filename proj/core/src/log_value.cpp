#include "biortho/core/log_value.hpp"

#include <algorithm>
#include <vector>

#include "biortho/core/errors.hpp"

namespace biortho {

LogValue::LogValue() : log_(BigFloat::infinity(-1, BigFloat::kDefaultBits)), sign_(0) {}

LogValue::LogValue(BigFloat log_magnitude, int sign) : log_(std::move(log_magnitude)), sign_(sign) {
  require(sign_ >= -1 && sign_ <= 1, "LogValue sign must be -1, 0 or +1", ErrorKind::invalid_argument);
  require(!log_.is_nan(), "LogValue magnitude is NaN", ErrorKind::invalid_argument);
  if (log_.is_inf() && log_.sign() < 0) sign_ = 0;
  if (sign_ == 0) log_ = BigFloat::infinity(-1, log_.bits());
  require(!(log_.is_inf() && log_.sign() > 0), "LogValue magnitude overflow", ErrorKind::invalid_argument);
}

LogValue LogValue::zero(Bits bits) { return {BigFloat::infinity(-1, bits), 0}; }

LogValue LogValue::from_real(const BigFloat& x) {
  require(x.is_finite(), "cannot encode a non-finite real", ErrorKind::invalid_argument);
  if (x.is_zero()) return zero(x.bits());
  return {log(biortho::abs(x)), x.sign() > 0 ? 1 : -1};
}

LogValue LogValue::from_double(double x, Bits bits) { return from_real(BigFloat(x, bits)); }

LogValue LogValue::from_log(const BigFloat& log_magnitude) { return {log_magnitude, 1}; }

LogValue LogValue::from_log(double log_magnitude, Bits bits) { return {BigFloat(log_magnitude, bits), 1}; }

BigFloat LogValue::to_real(Bits bits) const {
  if (sign_ == 0) return BigFloat(bits);
  BigFloat r = exp(BigFloat(log_, bits));
  return sign_ < 0 ? -r : r;
}

double LogValue::to_double() const { return to_real(64).to_double(); }

LogValue LogValue::sqrt() const {
  require(sign_ >= 0, "square root of a negative LogValue", ErrorKind::invalid_argument);
  if (sign_ == 0) return *this;
  return {log_ / 2.0, 1};
}

LogValue LogValue::pow(const BigFloat& exponent) const {
  require(sign_ > 0, "real power of a non-positive LogValue", ErrorKind::invalid_argument);
  return {log_ * exponent, 1};
}

LogValue LogValue::reciprocal() const {
  require(sign_ != 0, "reciprocal of zero", ErrorKind::invalid_argument);
  return {-log_, sign_};
}

std::string LogValue::to_string(int significant_digits) const {
  if (sign_ == 0) return "0";
  // Decimal exponent and mantissa from the log, so huge magnitudes print.
  const Bits b = log_.bits() + 32;
  const BigFloat log10v = BigFloat(log_, b) / log(BigFloat(10.0, b));
  BigFloat e = floor(log10v);
  BigFloat mant = exp((log10v - e) * log(BigFloat(10.0, b)));
  std::string digits = mant.to_string(significant_digits);
  // mant.to_string gives "d.ddde+00" (or e+01 after rounding up to 10).
  const auto epos = digits.find('e');
  long exp10 = e.to_long_floor() + std::stol(digits.substr(epos + 1));
  std::string out = (sign_ < 0 ? "-" : "") + digits.substr(0, epos) + "e";
  out += exp10 < 0 ? "-" : "+";
  const long ae = exp10 < 0 ? -exp10 : exp10;
  if (ae < 10) out += "0";
  out += std::to_string(ae);
  return out;
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  if (a.is_zero() || b.is_zero()) return LogValue::zero(std::max(a.bits(), b.bits()));
  return {a.log_magnitude() + b.log_magnitude(), a.sign() * b.sign()};
}

LogValue operator/(const LogValue& a, const LogValue& b) { return a * b.reciprocal(); }

LogValue operator+(const LogValue& a, const LogValue& b) {
  const LogValue terms[2] = {a, b};
  return log_sum(terms);
}

LogValue operator-(const LogValue& a, const LogValue& b) { return a + (-b); }

int compare(const LogValue& a, const LogValue& b) {
  if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
  if (a.sign() == 0) return 0;
  const int c = a.log_magnitude() < b.log_magnitude() ? -1 : (b.log_magnitude() < a.log_magnitude() ? 1 : 0);
  return a.sign() > 0 ? c : -c;
}

LogValue log_sum(std::span<const LogValue> terms) {
  Bits bits = BigFloat::kDefaultBits;
  std::vector<const LogValue*> live;
  for (const LogValue& t : terms) {
    bits = std::max(bits, t.bits());
    if (!t.is_zero()) live.push_back(&t);
  }
  if (live.empty()) return LogValue::zero(bits);
  std::sort(live.begin(), live.end(), [](const LogValue* x, const LogValue* y) {
    if (x->log_magnitude() != y->log_magnitude()) return x->log_magnitude() > y->log_magnitude();
    return x->sign() > y->sign();
  });
  const BigFloat top(live.front()->log_magnitude(), bits);
  BigFloat acc(bits);
  for (const LogValue* t : live) {
    BigFloat e = exp(BigFloat(t->log_magnitude(), bits) - top);
    if (t->sign() > 0) {
      acc += e;
    } else {
      acc -= e;
    }
  }
  if (acc.is_zero()) return LogValue::zero(bits);
  return {top + log(biortho::abs(acc)), acc.sign() > 0 ? 1 : -1};
}

}  // namespace biortho
