#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "biortho/core/bigfloat.hpp"
#include "biortho/core/log_value.hpp"
#include "biortho/spectra/gaps.hpp"
#include "biortho/spectra/spectrum.hpp"

namespace biortho::guichal {

// q(s) = sum_k A_k exp(-lambda_k s) with A_k = 1 / prod_{i != k} (lambda_i - lambda_k).
// q has a zero of order M at s = 0 and q^(M)(0) = 1.
struct GuichalSum {
  int M = 0;
  bool exact = false;                 // coefficients held as rationals
  std::vector<mpq_class> lambdas_q;   // exact mode only
  std::vector<mpq_class> coefficients_q;
  std::vector<BigFloat> lambdas;      // always set; exact copies in rational mode
  std::vector<BigFloat> coefficients; // rounded copies in rational mode

  // A_k at the given precision (recomputed from the inputs, not rounded again).
  BigFloat coefficient(std::size_t k, Bits bits) const;
};

// Rational mode. Doubles are binary rationals, so they always qualify.
GuichalSum guichal_coefficients(std::span<const mpq_class> lambdas, Bits bits = 256);
GuichalSum guichal_coefficients(std::span<const double> lambdas, Bits bits = 256);
// Big-float mode at the precision of the inputs.
GuichalSum guichal_coefficients(std::span<const BigFloat> lambdas);

// sum_k A_k (-lambda_k)^j - [j == M] for j = 0..M. All zero when q has the right jet.
std::vector<mpq_class> jet_defects_exact(const GuichalSum& g);
std::vector<BigFloat> jet_defects(const GuichalSum& g, Bits bits);

// q(s), with the working precision raised until cancellation leaves `bits` good bits.
BigFloat q_eval(const GuichalSum& g, double s, Bits bits = 128);

// s^M / M! exp(-lambda_1 s).
BigFloat q_envelope(const GuichalSum& g, double s, Bits bits = 128);

struct MomentIntegral {
  LogValue exact;         // (int_0^T s^{2M} / M!^2 exp(-2 lambda_1 s) ds)^{1/2}
  LogValue closed_bound;  // T^M / M! sqrt(2T) / sqrt(2M + 1 + 2 T lambda_1)
};

MomentIntegral moment_integral(int M, double lambda1, double T, Bits bits = 128);

// ln gamma(a, x), the lower incomplete gamma function, for a > 0 and x >= 0 (x = 0 gives -inf).
BigFloat log_lower_gamma(const BigFloat& a, const BigFloat& x);

struct ExpTail {
  LogValue value;  // sum_{n >= N} x^n / n!
  LogValue lower;  // (x / (1 + x))^N e^x / N!
  LogValue upper;  // C1 N (x / (1 + x))^N e^x
};

// max over x >= 0 of (1 - e^{-x})(1 + x) / x, located by Brent's method and
// evaluated at the maximiser in extended precision.
double tail_constant_c1();

ExpTail exp_tail(int N, double x, Bits bits = 128);

// prod_{i <= M+1, i != m} |lambda_i - lambda_m| times the exact moment integral.
LogValue distance_upper_bound(const spectra::Spectrum& s, double T, int m, int M, Bits bits = 128);

enum class Regime { one_gap, two_gap_m_le_nstar, two_gap_m_gt_nstar, best_m_scan };
std::string to_string(Regime r);

struct BoundParameters {
  int k_star = 0;        // one gap
  int K_star = 0;        // two gaps
  int K_prime_star = 0;  // two gaps, m <= N_*
  int M_used = 0;        // M scan
  // Named log-domain constants of the chain, for reporting.
  std::vector<std::pair<std::string, double>> log_constants;
};

struct LowerBoundResult {
  LogValue bound_on_inverse_distance;
  Regime regime = Regime::one_gap;
  BoundParameters parameters;
};

// 1/d_{T,m} >= C exp(1 / (T gamma_max^2)) under a uniform upper gap gamma_max.
LowerBoundResult lower_bound_one_gap(double T, double gamma_max, double lambda1, int m, Bits bits = 128);

// Uniform gap gamma_max together with gamma_max* from N_* = p.n_star_lower on.
LowerBoundResult lower_bound_two_gap(const spectra::Spectrum& s, const spectra::GapProfile& p, double T, int m,
                                     Bits bits = 128);

// max over M in [M_lo, M_hi] of 1 / distance_upper_bound.
LowerBoundResult best_lower_bound(const spectra::Spectrum& s, double T, int m, int M_lo, int M_hi,
                                  Bits bits = 128);

// Fit v(T) = c0 + c1 T + c2 T ln T through three points; c0 is the limit of v as T -> 0.
struct RateFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};
RateFit fit_small_time_rate(std::span<const double> T, std::span<const double> v);

std::string bounds_csv_header();
// margin = log_inverse_distance - log_bound; nonnegative when the bound is sound.
std::string bounds_csv_row(int m, double T, const LowerBoundResult& r, const LogValue& inverse_distance);

}  // namespace biortho::guichal
