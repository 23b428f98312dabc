#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "biortho/core/errors.hpp"
#include "biortho/gram/gram.hpp"
#include "biortho/guichal/guichal.hpp"
#include "biortho/spectra/gaps.hpp"
#include "random_spectra.hpp"

using namespace biortho;
using namespace biortho::guichal;
using spectra::Spectrum;

namespace {

// Frozen from 40-digit mpmath: quadrature, nsum and a findroot of f'(x) = 0.
constexpr double kQ12At1 = 0.2325441579348296297;
constexpr double kQ123AtHalf = 0.04695096875908930467;
constexpr double kMoment111 = 0.2843077486707566596;
constexpr double kMoment523 = 0.006262541333676010505;
constexpr double kMoment302 = 0.7126966450997983592;
constexpr double kLogMoment40 = -165.1328023916328163;  // mpmath gammainc; plain quadrature misses the endpoint peak
constexpr double kC1 = 1.298425607525639119;
constexpr double kTail7At35 = 2.162044840636758195;
constexpr double kLogTail60At001 = -464.9382206355257242;
constexpr double kOneGapC = 9.617792040959709045e-8;
constexpr double kOneGapBound = 2.614386933483881039e-7;
constexpr double kOneGapBound2 = 1.122001186626921011e-10;
constexpr double kLogTwoGapA = -32.74419590233468239;
constexpr double kLogTwoGapB = -53.22420029578394263;

PrecisionContext ctx_for(int digits) {
  PrecisionContext c;
  c.working_digits = digits;
  c.residual_target = 1e-20;
  return c;
}

}  // namespace

TEST(GuichalCoefficients, SmallExamples) {
  const std::vector<double> l12{1, 2};
  const GuichalSum g = guichal_coefficients(l12);
  ASSERT_TRUE(g.exact);
  EXPECT_EQ(g.M, 1);
  EXPECT_EQ(g.coefficients_q[0], 1);
  EXPECT_EQ(g.coefficients_q[1], -1);

  const std::vector<double> l123{1, 2, 3};
  const GuichalSum h = guichal_coefficients(l123);
  EXPECT_EQ(h.coefficients_q[0], mpq_class(1, 2));
  EXPECT_EQ(h.coefficients_q[1], -1);
  EXPECT_EQ(h.coefficients_q[2], mpq_class(1, 2));

  const std::vector<double> l5{5};
  const GuichalSum one = guichal_coefficients(l5);
  EXPECT_EQ(one.M, 0);
  EXPECT_EQ(one.coefficients_q[0], 1);
  EXPECT_EQ(q_eval(one, 0.0).to_double(), 1.0);
  EXPECT_NEAR(q_eval(one, 0.3).to_double(), std::exp(-1.5), 1e-16);
}

TEST(GuichalCoefficients, RejectsDuplicatesAndDisorder) {
  const std::vector<double> dup{1, 2, 2};
  EXPECT_THROW(guichal_coefficients(dup), Error);
  const std::vector<double> down{2, 1};
  EXPECT_THROW(guichal_coefficients(down), Error);
  const std::vector<double> none;
  EXPECT_THROW(guichal_coefficients(none), Error);
}

TEST(GuichalCoefficients, JetIsExactInRationalMode) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(1, 400), den(1, 9);
  for (int M = 0; M <= 12; ++M) {
    std::vector<mpq_class> l;
    mpq_class cur(num(rng), den(rng));
    for (int i = 0; i <= M; ++i) {
      l.push_back(cur);
      cur += mpq_class(num(rng), den(rng));
    }
    const GuichalSum g = guichal_coefficients(std::span<const mpq_class>(l));
    for (const mpq_class& d : jet_defects_exact(g)) EXPECT_EQ(d, 0) << "M=" << M;
  }
}

TEST(GuichalCoefficients, BigFloatModeJetIsSmall) {
  const Bits b = 300;
  std::vector<BigFloat> l;
  for (int i = 1; i <= 9; ++i) l.push_back(sqrt(BigFloat(static_cast<long>(i * i + 1), b)));
  const GuichalSum g = guichal_coefficients(std::span<const BigFloat>(l));
  EXPECT_FALSE(g.exact);
  for (const BigFloat& d : jet_defects(g, b)) EXPECT_LT(abs(d).to_double(), 1e-70);
}

TEST(QEval, ClosedFormsAndEnvelope) {
  const std::vector<double> l12{1, 2}, l123{1, 2, 3};
  const GuichalSum g = guichal_coefficients(l12), h = guichal_coefficients(l123);
  EXPECT_NEAR(q_eval(g, 1.0).to_double(), kQ12At1, 1e-17);
  EXPECT_NEAR(q_envelope(g, 1.0).to_double(), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(q_eval(h, 0.5).to_double(), kQ123AtHalf, 1e-17);
  EXPECT_NEAR(q_envelope(h, 0.5).to_double(), 0.125 * std::exp(-0.5), 1e-16);
  EXPECT_TRUE(q_eval(g, 0.0).is_zero());
  EXPECT_TRUE(q_eval(h, 0.0).is_zero());
  EXPECT_THROW(q_eval(g, -1.0), Error);
}

TEST(QEval, EnvelopeHoldsOnRandomSets) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int M = 1 + trial % 10;
    std::vector<double> l;
    double cur = 3.0 * u(rng);
    for (int i = 0; i <= M; ++i) {
      l.push_back(cur);
      cur += 0.05 + 4.0 * u(rng);
    }
    const GuichalSum g = guichal_coefficients(l);
    for (double s : {1e-4, 0.01, 0.3, 1.0, 4.0, 20.0}) {
      const BigFloat q = q_eval(g, s);
      EXPECT_GT(q.sign(), 0) << "M=" << M << " s=" << s;
      EXPECT_LE(q, q_envelope(g, s)) << "M=" << M << " s=" << s;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 360);
}

TEST(QEval, SmallArgumentNeedsExtraPrecision) {
  // q ~ s^M / M! near the origin while the terms are of size |A_k|.
  std::vector<double> l;
  for (int i = 1; i <= 11; ++i) l.push_back(i);
  const GuichalSum g = guichal_coefficients(l);
  const BigFloat q = q_eval(g, 1e-6);
  const double lead = std::pow(1e-6, 10) / 3628800.0;
  EXPECT_NEAR(q.to_double() / lead, 1.0, 1e-4);
}

TEST(MomentIntegral, ClosedFormsAndQuadratureOracle) {
  const MomentIntegral a = moment_integral(1, 1.0, 1.0);
  EXPECT_NEAR(a.exact.to_double(), kMoment111, 1e-17);
  EXPECT_NEAR(a.closed_bound.to_double(), std::sqrt(2.0 / 5.0), 1e-16);
  EXPECT_NEAR(moment_integral(0, 0.0, 2.5).exact.to_double(), std::sqrt(2.5), 1e-16);
  EXPECT_NEAR(moment_integral(5, 2.0, 3.0).exact.to_double() / kMoment523, 1.0, 1e-16);
  EXPECT_NEAR(moment_integral(3, 0.0, 2.0).exact.to_double() / kMoment302, 1.0, 1e-16);
  EXPECT_NEAR(moment_integral(40, 50.0, 0.5).exact.log_double(), kLogMoment40, 1e-13);
}

TEST(MomentIntegral, ClosedBoundDominates) {
  for (int M : {0, 1, 3, 10, 40})
    for (double l : {0.0, 0.5, 4.0, 100.0})
      for (double T : {0.01, 0.3, 1.0, 7.0}) {
        const MomentIntegral r = moment_integral(M, l, T);
        EXPECT_LE(r.exact, r.closed_bound) << M << " " << l << " " << T;
      }
}

TEST(LowerGamma, BothBranchesAgree) {
  // Around x = a + 1 the series and the complement route meet.
  const Bits b = 200;
  const BigFloat a(7L, b);
  const BigFloat below = log_lower_gamma(a, BigFloat(7.999999, b));
  const BigFloat above = log_lower_gamma(a, BigFloat(8.000001, b));
  EXPECT_NEAR((above - below).to_double(), 0.0, 1e-6);
  EXPECT_TRUE(log_lower_gamma(a, BigFloat(0L, b)).is_inf());
}

TEST(ExpTail, ExamplesAndSandwich) {
  EXPECT_NEAR(tail_constant_c1(), kC1, 1e-13);
  const ExpTail t = exp_tail(1, 1.0);
  EXPECT_NEAR(t.value.to_double(), std::exp(1.0) - 1.0, 1e-15);
  EXPECT_NEAR(t.lower.to_double(), std::exp(1.0) / 2.0, 1e-15);
  EXPECT_NEAR(t.upper.to_double(), kC1 * std::exp(1.0) / 2.0, 1e-12);
  const ExpTail t2 = exp_tail(2, 1.0);
  EXPECT_NEAR(t2.value.to_double(), std::exp(1.0) - 2.0, 1e-15);
  EXPECT_NEAR(t2.lower.to_double(), std::exp(1.0) / 8.0, 1e-15);
  EXPECT_NEAR(exp_tail(7, 3.5).value.to_double(), kTail7At35, 1e-15);
  EXPECT_NEAR(exp_tail(60, 0.01).value.log_double(), kLogTail60At001, 1e-12);
  EXPECT_NEAR(exp_tail(3, 700.0).value.log_double(), 700.0, 1e-12);
  const ExpTail z = exp_tail(4, 0.0);
  EXPECT_TRUE(z.value.is_zero() && z.lower.is_zero() && z.upper.is_zero());
}

TEST(ExpTail, SandwichOnGrid) {
  // Equality is attained in the upper bound at N = 1 and the maximiser of C1,
  // so the comparison allows a relative slack far below any real violation.
  const double slack = 1e-12;
  for (int N = 1; N <= 50; ++N) {
    for (int k = 0; k < 60; ++k) {
      const double x = std::pow(10.0, -3.0 + 6.0 * k / 59.0);
      const ExpTail t = exp_tail(N, x);
      EXPECT_LE(t.lower.log_double(), t.value.log_double() + slack) << N << " " << x;
      EXPECT_LE(t.value.log_double(), t.upper.log_double() + slack) << N << " " << x;
    }
  }
}

TEST(DistanceUpperBound, ExampleAndGramComparison) {
  const Spectrum s({1, 4});
  EXPECT_NEAR(distance_upper_bound(s, 1.0, 1, 1).to_double(), 3.0 * kMoment111, 1e-16);
  EXPECT_THROW(distance_upper_bound(s, 1.0, 1, 2), Error);
  EXPECT_THROW(distance_upper_bound(s, 1.0, 2, 1), Error);

  const Spectrum sq = spectra::gen_quadratic(1, 0, 0, 12);
  const gram::DistanceResult d = gram::distance(sq, 1.0, 1, ctx_for(60));
  for (int M = 1; M <= 11; ++M) EXPECT_GE(distance_upper_bound(sq, 1.0, 1, M), d.d) << M;
}

TEST(OneGap, FrozenValues) {
  const LowerBoundResult r = lower_bound_one_gap(1.0, 1.0, 1.0, 1);
  EXPECT_EQ(r.parameters.k_star, 5);
  EXPECT_EQ(r.regime, Regime::one_gap);
  EXPECT_EQ(r.bound_on_inverse_distance.sign(), 1);
  EXPECT_NEAR(r.bound_on_inverse_distance.to_double() / kOneGapBound, 1.0, 1e-15);
  EXPECT_NEAR(std::exp(r.parameters.log_constants[1].second) / kOneGapC, 1.0, 1e-14);
  const LowerBoundResult r2 = lower_bound_one_gap(0.1, 1.5, 0.3, 3);
  EXPECT_NEAR(r2.bound_on_inverse_distance.to_double() / kOneGapBound2, 1.0, 1e-15);
  EXPECT_THROW(lower_bound_one_gap(1.0, 1.0, 0.0, 1), Error);
}

TEST(OneGap, ExponentialFactorDominates) {
  const std::vector<double> T{0.1, 0.05, 0.025};
  std::vector<double> v;
  for (double t : T) v.push_back(t * lower_bound_one_gap(t, 1.0, 1.0, 1).bound_on_inverse_distance.log_double());
  const RateFit f = fit_small_time_rate(T, v);
  EXPECT_NEAR(f.c0, 1.0, 0.15);
}

TEST(TwoGap, FrozenValues) {
  // N_* = 3, gamma_max = 2, gamma_max* = 1, lambda_1 = 1.
  const Spectrum s({1, 9, 25, 36, 49});
  spectra::GapProfile p;
  p.gamma_min = p.gamma_min_star = 1.0;
  p.gamma_max = 2.0;
  p.gamma_max_star = 1.0;
  p.n_star_lower = p.n_star_upper = 3;
  const LowerBoundResult r = lower_bound_two_gap(s, p, 1.0, 1);
  EXPECT_EQ(r.parameters.K_star, 9);
  EXPECT_EQ(r.regime, Regime::two_gap_m_le_nstar);
  EXPECT_NEAR(r.bound_on_inverse_distance.log_double(), kLogTwoGapA, 1e-13);

  const Spectrum s2({0.5, 3, 5});
  spectra::GapProfile q = p;
  q.gamma_max = 1.5;
  const LowerBoundResult r2 = lower_bound_two_gap(s2, q, 0.25, 6);
  EXPECT_EQ(r2.regime, Regime::two_gap_m_gt_nstar);
  EXPECT_EQ(r2.parameters.K_star, 13);
  EXPECT_NEAR(r2.bound_on_inverse_distance.log_double(), kLogTwoGapB, 1e-13);
}

TEST(TwoGap, DegenerateProfileReducesToOneGap) {
  // gamma_max = gamma_max*, N_* = 1: same tail, constants differ by 2m + [2 sqrt(lambda_1)/gamma] + 1.
  const Spectrum s = spectra::gen_quadratic(1, 0, 0, 6);
  spectra::GapProfile p = spectra::analyze_gaps(s, 1);
  const LowerBoundResult two = lower_bound_two_gap(s, p, 1.0, 2);
  const LowerBoundResult one = lower_bound_one_gap(1.0, 1.0, 1.0, 2);
  EXPECT_EQ(two.parameters.K_star, one.parameters.k_star);
  const double ratio = std::exp(two.bound_on_inverse_distance.log_double() - one.bound_on_inverse_distance.log_double());
  EXPECT_NEAR(ratio, 7.0, 1e-12);
}

TEST(TwoGap, ExponentialFactorDominates) {
  const Spectrum s = spectra::gen_quadratic(1, 0.3, 0, 30);
  const spectra::GapProfile p = spectra::analyze_gaps(s, 3);
  const std::vector<double> T{0.1, 0.05, 0.025};
  std::vector<double> v;
  for (double t : T) {
    v.push_back(t * p.gamma_max_star * p.gamma_max_star *
                lower_bound_two_gap(s, p, t, 2).bound_on_inverse_distance.log_double());
  }
  EXPECT_NEAR(fit_small_time_rate(T, v).c0, 1.0, 0.15);
}

TEST(BestLowerBound, ScanAndExample) {
  const Spectrum s({1, 4});
  const LowerBoundResult r = best_lower_bound(s, 1.0, 1, 1, 1);
  EXPECT_EQ(r.regime, Regime::best_m_scan);
  EXPECT_NEAR(r.bound_on_inverse_distance.to_double(), 1.0 / (3.0 * kMoment111), 1e-15);

  const Spectrum sq = spectra::gen_quadratic(1, 0, 0, 12);
  const LowerBoundResult one = best_lower_bound(sq, 1.0, 1, 1, 1);
  const LowerBoundResult many = best_lower_bound(sq, 1.0, 1, 1, 10);
  EXPECT_GE(many.bound_on_inverse_distance, one.bound_on_inverse_distance);
  EXPECT_GE(many.parameters.M_used, 1);
  EXPECT_THROW(best_lower_bound(sq, 1.0, 1, 1, 12), Error);
}

TEST(Soundness, AllBoundsBelowInverseDistance) {
  // Finite truncations overestimate d, so 1/d_N is a stricter ceiling than 1/d.
  const int N = 24;
  for (double shift : {0.0, 0.3}) {
    const Spectrum s = spectra::gen_quadratic(1, shift, 0, N);
    for (double T : {0.25, 1.0}) {
      for (int m = 1; m <= 6; ++m) {
        const LogValue inv = gram::distance(s, T, m, ctx_for(60)).d.reciprocal();
        const LogValue one = lower_bound_one_gap(T, spectra::analyze_gaps(s, 1).gamma_max, s.lambda(1), m)
                                 .bound_on_inverse_distance;
        EXPECT_LE(one.log_double(), inv.log_double() + 1e-8) << shift << " " << T << " " << m;
        for (int ns : {1, 3, 6}) {
          const spectra::GapProfile p = spectra::analyze_gaps(s, ns);
          const LowerBoundResult two = lower_bound_two_gap(s, p, T, m);
          EXPECT_LE(two.bound_on_inverse_distance.log_double(), inv.log_double() + 1e-8)
              << shift << " " << T << " " << m << " N*=" << ns;
        }
        const LowerBoundResult best = best_lower_bound(s, T, m, m, N - 1);
        EXPECT_LE(best.bound_on_inverse_distance.log_double(), inv.log_double() + 1e-8);
        EXPECT_GE(best.bound_on_inverse_distance, one);
      }
    }
  }
}

TEST(Soundness, RandomTwoGapSpectra) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const int ns = 2 + trial % 4;
    const Spectrum s = test_support::random_two_gap_spectrum(rng, 18, ns, 1.0, 2.5, 0.8, 1.2);
    if (s.lambda(1) <= 0.0) continue;
    const spectra::GapProfile p = spectra::analyze_gaps(s, ns);
    for (double T : {0.3, 1.0}) {
      for (int m = 1; m <= 5; ++m) {
        const LogValue inv = gram::distance(s, T, m, ctx_for(60)).d.reciprocal();
        EXPECT_LE(lower_bound_two_gap(s, p, T, m).bound_on_inverse_distance.log_double(),
                  inv.log_double() + 1e-8)
            << trial << " " << T << " " << m;
      }
    }
  }
}

TEST(BoundsCsv, RowShape) {
  const LowerBoundResult r = lower_bound_one_gap(1.0, 1.0, 1.0, 1);
  const LogValue inv = LogValue::from_double(6.5);
  EXPECT_EQ(bounds_csv_header(), "m,T,regime,log_bound,log_inverse_distance,margin\n");
  const std::string row = bounds_csv_row(1, 1.0, r, inv);
  EXPECT_EQ(row.rfind("1,1.0000000000000000e+00,one_gap,", 0), 0u);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 5);
}
