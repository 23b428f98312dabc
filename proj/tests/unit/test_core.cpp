#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "biortho/core/bigfloat.hpp"
#include "biortho/core/errors.hpp"
#include "biortho/core/log_value.hpp"
#include "biortho/core/precision.hpp"
#include "biortho/core/special.hpp"

using namespace biortho;

TEST(PrecisionContext, RejectsInvalidSettings) {
  PrecisionContext ctx;
  EXPECT_NO_THROW(ctx.validate());
  EXPECT_THROW(ctx.with_digits(29).validate(), Error);
  PrecisionContext bad = ctx;
  bad.residual_target = 1.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = ctx;
  bad.escalation_factor = 1;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_EQ(ctx.escalated().working_digits, 100);
}

TEST(LogSum, TwoPlusTwoIsFour) {
  const Bits b = bits_for_digits(40);
  const LogValue two = LogValue::from_log(log(BigFloat(2.0, b)));
  const LogValue terms[] = {two, two};
  const LogValue s = log_sum(terms);
  EXPECT_EQ(s.sign(), 1);
  EXPECT_LT(abs(s.log_magnitude() - log(BigFloat(4.0, b))).to_double(), 1e-38);
}

TEST(LogSum, ExactCancellationGivesZero) {
  const LogValue terms[] = {LogValue(BigFloat(0.0, 128), 1), LogValue(BigFloat(0.0, 128), -1)};
  const LogValue s = log_sum(terms);
  EXPECT_EQ(s.sign(), 0);
  EXPECT_TRUE(s.log_magnitude().is_inf());
  EXPECT_LT(s.log_magnitude(), 0.0);
}

TEST(LogSum, ThreeMinusOneIsTwo) {
  const Bits b = bits_for_digits(40);
  const LogValue terms[] = {LogValue::from_log(log(BigFloat(3.0, b))), LogValue(BigFloat(0.0, b), -1)};
  const LogValue s = log_sum(terms);
  EXPECT_EQ(s.sign(), 1);
  EXPECT_LT(abs(s.log_magnitude() - log(BigFloat(2.0, b))).to_double(), 1e-38);
}

TEST(LogSum, ZeroTermsAreIgnored) {
  const LogValue terms[] = {LogValue::zero(), LogValue::from_double(5.0)};
  EXPECT_NEAR(log_sum(terms).to_double(), 5.0, 1e-15);
}

TEST(LogValue, RoundTripAtWorkingPrecision) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int digits : {30, 50, 100}) {
    const Bits b = bits_for_digits(digits);
    const BigFloat tol = pow(BigFloat(10.0, b), 1 - digits);
    for (int i = 0; i < 200; ++i) {
      // Full-width mantissa: sum of two doubles and an exponent.
      BigFloat x = (BigFloat(mant(rng), b) + BigFloat(mant(rng), b) * 1e-17) * pow(BigFloat(10.0, b), ex(rng));
      if (x.is_zero()) continue;
      const BigFloat back = LogValue::from_real(x).to_real(b);
      EXPECT_LE(abs((back - x) / x), tol) << "digits=" << digits;
    }
  }
}

TEST(LogSum, PermutationInvariantAtBitLevel) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-50.0, 50.0);
  const Bits b = bits_for_digits(60);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LogValue> terms;
    for (int i = 0; i < 12; ++i) {
      terms.emplace_back(BigFloat(std::round(mag(rng)), b) / 3.0, (rng() & 1) ? 1 : -1);
    }
    const LogValue ref = log_sum(terms);
    for (int p = 0; p < 5; ++p) {
      std::shuffle(terms.begin(), terms.end(), rng);
      const LogValue s = log_sum(terms);
      EXPECT_EQ(s.sign(), ref.sign());
      if (s.sign() != 0) EXPECT_TRUE(s.log_magnitude() == ref.log_magnitude());
    }
  }
}

TEST(LogValue, HugeMagnitudesPrint) {
  const LogValue v = LogValue::from_log(1000.0, 128);  // e^1000 = 1.970071114017046993888...e+434
  EXPECT_EQ(v.to_string(), "1.9700711140170470e+434");
  EXPECT_EQ((-LogValue::from_double(0.25)).to_string(), "-2.5000000000000000e-01");
  EXPECT_EQ(LogValue::zero().to_string(), "0");
}

TEST(LogValue, ArithmeticAndComparison) {
  const LogValue a = LogValue::from_double(3.0, 128), b = LogValue::from_double(-2.0, 128);
  EXPECT_NEAR((a * b).to_double(), -6.0, 1e-14);
  EXPECT_NEAR((a / b).to_double(), -1.5, 1e-14);
  EXPECT_NEAR((a + b).to_double(), 1.0, 1e-14);
  EXPECT_NEAR((a - b).to_double(), 5.0, 1e-14);
  EXPECT_TRUE(b < a);
  EXPECT_TRUE(LogValue::zero() < a);
  EXPECT_TRUE(b < LogValue::zero());
  EXPECT_NEAR(a.sqrt().to_double(), std::sqrt(3.0), 1e-14);
}

TEST(ZetaTail, MatchesDirectSummationAndClosedForm) {
  const Bits b = bits_for_digits(60);
  // sum_{k>0} k^-2 = pi^2/6
  const BigFloat pi = BigFloat::pi(b);
  EXPECT_LT(abs(zeta_tail(2, 0, b) - pi * pi / 6.0).to_double(), 1e-58);
  // sum_{k>3} k^-4 = pi^4/90 - 1 - 1/16 - 1/81
  const BigFloat expect = pow(pi, 4) / 90.0 - 1.0 - BigFloat(1.0, b) / 16.0 - BigFloat(1.0, b) / 81.0;
  EXPECT_LT(abs(zeta_tail(4, 3, b) - expect).to_double(), 1e-58);
  // Large s and K: compare with a long direct sum.
  BigFloat direct(b);
  for (long k = 51; k < 2400; ++k) direct += pow(BigFloat(k, b), -40L);
  const BigFloat t = zeta_tail(40, 50, b);
  EXPECT_LT(abs((t - direct) / t).to_double(), 1e-55);
}

TEST(LogCosCoefficients, ReproduceLogCos) {
  const Bits b = bits_for_digits(50);
  const auto c = log_cos_coefficients(60, b);
  EXPECT_LT(abs(c[0] - 0.5).to_double(), 1e-50);
  EXPECT_LT(abs(c[1] - BigFloat(1.0, b) / 12.0).to_double(), 1e-50);
  const BigFloat w(0.3, b);
  BigFloat series(b), w2 = w * w, wp = w2;
  for (const auto& cj : c) {
    series -= cj * wp;
    wp *= w2;
  }
  EXPECT_LT(abs(series - log(cos(w))).to_double(), 1e-48);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto rule = gauss_legendre(12);
  for (int deg = 0; deg <= 23; ++deg) {
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], deg);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
    EXPECT_NEAR(s, exact, 1e-14) << deg;
  }
}

TEST(BigFloat, PrecisionPropagatesToTheWiderOperand) {
  const BigFloat a(1.0, 64), b(3.0, 256);
  EXPECT_EQ((a / b).bits(), 256);
  EXPECT_EQ((b - a).bits(), 256);
  BigFloat c(1.0, 64);
  c += b;
  EXPECT_EQ(c.bits(), 256);
  EXPECT_EQ(BigFloat::from_string("0.1", 200).to_string(5), "1.0000e-01");
  EXPECT_THROW(BigFloat::from_string("1x", 64), Error);
}
