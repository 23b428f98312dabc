#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "biortho/core/errors.hpp"
#include "biortho/core/special.hpp"
#include "biortho/sai/sai.hpp"

namespace biortho::sai {

namespace {

constexpr int kSeriesTerms = 60;
constexpr double kInf = std::numeric_limits<double>::infinity();

double zeta_tail_double(unsigned long s, long K) { return zeta_tail(s, K, 64).to_double(); }

}  // namespace

void MollifierParams::validate() const {
  require(T_prime > 0.0 && std::isfinite(T_prime), "T' must be positive", ErrorKind::invalid_argument);
  require(N_prime >= 1, "N' must be >= 1", ErrorKind::invalid_argument);
  require(C_const > 0.0 && std::isfinite(C_const), "mollifier constant must be positive",
          ErrorKind::invalid_argument);
  require(truncation_K >= 0, "truncation_K must be >= 0", ErrorKind::invalid_argument);
}

void CalibrationConstants::validate() const {
  for (double v : {theta0, theta1, theta2, theta3, C_u_growth})
    require(v > 0.0 && std::isfinite(v), "calibration constants must be positive", ErrorKind::invalid_argument);
  require(theorem_C >= 0.0 && std::isfinite(theorem_C), "theorem_C must be nonnegative",
          ErrorKind::invalid_argument);
}

MollifierParams choose_params(double T, double gamma_min_star, const CalibrationConstants& cal) {
  require(T > 0.0 && std::isfinite(T), "T must be positive", ErrorKind::invalid_argument);
  require(gamma_min_star > 0.0, "gamma_min* must be positive", ErrorKind::invalid_argument);
  require(cal.theta3 > 0.0, "theta3 must be positive", ErrorKind::invalid_argument);
  const double g2 = gamma_min_star * gamma_min_star;
  MollifierParams p;
  p.T_prime = std::min(T, 1.0 / g2);
  const double n = std::ceil(2.0 + cal.theta3 / (g2 * p.T_prime));
  require(n < 1e8, "N' too large", ErrorKind::precondition);
  p.N_prime = static_cast<int>(n);
  p.theta3 = cal.theta3;
  p.C_const = p.T_prime / (2.0 * zeta_tail_double(2, p.N_prime - 1));
  return p;
}

CosineProduct::CosineProduct(double C, int N_prime) : C_(C), n_prime_(N_prime) {
  require(C > 0.0 && std::isfinite(C), "cosine product needs C > 0", ErrorKind::invalid_argument);
  require(N_prime >= 1, "cosine product needs N' >= 1", ErrorKind::invalid_argument);
  for (const BigFloat& c : log_cos_coefficients(kSeriesTerms, 64)) c_.push_back(c.to_double());
  half_T_prime_ = C * zeta_tail_double(2, N_prime - 1);
}

const CosineProduct::Level& CosineProduct::level_for(double w) const {
  // Factors k > K satisfy a_k |z| = w / k^2 < 1.
  const double need = std::max<double>(n_prime_ - 1, std::ceil(std::sqrt(w)));
  require(need < 1e12, "cosine product argument too large", ErrorKind::precondition);
  long K = n_prime_ - 1;
  while (K < need) K += std::max<long>(1, K / 4);
  auto it = levels_.find(K);
  if (it != levels_.end()) return it->second;
  Level L;
  L.K = K;
  const BigFloat k1(K + 1, 64);
  for (int j = 1; j <= kSeriesTerms; ++j)
    L.z.push_back((pow(k1, 4L * j) * zeta_tail(4UL * j, K, 64)).to_double());
  L.zeta2 = zeta_tail_double(2, K);
  return levels_.emplace(K, std::move(L)).first->second;
}

double CosineProduct::log_abs_real(double x, int& sign) const {
  const double ax = std::fabs(x);
  const Level& L = level_for(C_ * ax);
  double sum = 0.0;
  sign = 1;
  for (long k = n_prime_; k <= L.K; ++k) {
    const double c = std::cos(C_ * ax / (static_cast<double>(k) * k));
    if (c == 0.0) {
      sign = 0;
      return -kInf;
    }
    if (c < 0.0) sign = -sign;
    sum += std::log(std::fabs(c));
  }
  const double r = C_ * ax / ((L.K + 1.0) * (L.K + 1.0));
  const double r2 = r * r;
  double rp = r2, tail = 0.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    const double term = c_[j] * rp * L.z[j];
    tail += term;
    if (term < 1e-18 * tail) break;
    rp *= r2;
  }
  return sum - tail;
}

double CosineProduct::log_P_imag(double y) const {
  require(y >= 0.0, "log_P_imag needs y >= 0", ErrorKind::invalid_argument);
  const Level& L = level_for(C_ * y);
  double sum = 0.0;
  for (long k = n_prime_; k <= L.K; ++k) {
    const double w = C_ * y / (static_cast<double>(k) * k);
    sum += std::log1p(std::exp(-2.0 * w)) - std::numbers::ln2;
  }
  const double r = C_ * y / ((L.K + 1.0) * (L.K + 1.0));
  const double r2 = r * r;
  double rp = r2, series = 0.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    const double term = c_[j] * rp * L.z[j];
    series += (j % 2 == 0) ? term : -term;
    if (term < 1e-18 * std::fabs(series)) break;
    rp *= r2;
  }
  // ln cosh over the tail is +sum_j (-1)^{j+1} c_j (a y)^{2j}.
  return sum + series - y * C_ * L.zeta2;
}

double CosineProduct::log_abs_P(std::complex<double> z) const {
  const Level& L = level_for(C_ * std::abs(z));
  const double v_z = z.imag();
  double sum = 0.0;
  for (long k = n_prime_; k <= L.K; ++k) {
    const double a = C_ / (static_cast<double>(k) * k);
    const double u = a * z.real(), v = a * v_z, av = std::fabs(v);
    // ln|cos w| - |v| = ln((1 + e^{-4|v|} + 2 cos 2u e^{-2|v|}) / 4) / 2
    const double e2 = std::exp(-2.0 * av);
    const double q = 1.0 + e2 * e2 + 2.0 * std::cos(2.0 * u) * e2;
    if (q <= 0.0) return -kInf;
    sum += 0.5 * std::log(q / 4.0) + av - v;
  }
  const std::complex<double> u = C_ * z / ((L.K + 1.0) * (L.K + 1.0));
  const std::complex<double> u2 = u * u;
  std::complex<double> up = u2, series = 0.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    const std::complex<double> term = c_[j] * up * L.z[j];
    series += term;
    if (std::abs(term) < 1e-18 * std::abs(series)) break;
    up *= u2;
  }
  return sum - series.real() - v_z * C_ * L.zeta2;
}

double CosineProduct::arg_P(std::complex<double> z) const {
  const Level& L = level_for(C_ * std::abs(z));
  double phase = z.real() * half_T_prime_;
  for (long k = n_prime_; k <= L.K; ++k) {
    const double a = C_ / (static_cast<double>(k) * k);
    // arg cos(u + iv) = atan2(-sin u sinh v, cos u cosh v)
    const double u = a * z.real(), v = a * z.imag();
    phase += std::atan2(-std::sin(u) * std::tanh(v), std::cos(u));
  }
  const std::complex<double> u = C_ * z / ((L.K + 1.0) * (L.K + 1.0));
  const std::complex<double> u2 = u * u;
  std::complex<double> up = u2, series = 0.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    const std::complex<double> term = c_[j] * up * L.z[j];
    series += term;
    if (std::abs(term) < 1e-18 * std::abs(series)) break;
    up *= u2;
  }
  return std::remainder(phase - series.imag(), 2.0 * std::numbers::pi);
}

double CosineProduct::log_abs_real_bound(double a, double b) const {
  require(0.0 <= a && a <= b, "bound needs 0 <= a <= b", ErrorKind::invalid_argument);
  // Past the cut every a_k x < pi/2 on [a, b]: ln cos is below any partial sum of
  // its (negative) series, smallest at x = a. Before the cut |cos| on an interval
  // free of multiples of pi peaks at an endpoint.
  const Level& L = level_for(C_ * b * 2.0 / std::numbers::pi);
  double sum = 0.0;
  for (long k = n_prime_; k <= L.K; ++k) {
    const double ak = C_ / (static_cast<double>(k) * k);
    const double alpha = ak * a, beta = ak * b;
    if (std::floor(beta / std::numbers::pi) >= std::ceil(alpha / std::numbers::pi)) continue;
    sum += std::log(std::max(std::fabs(std::cos(alpha)), std::fabs(std::cos(beta))));
  }
  const double r = C_ * a / ((L.K + 1.0) * (L.K + 1.0));
  const double r2 = r * r;
  double rp = r2, series = 0.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    series += c_[j] * rp * L.z[j];
    rp *= r2;
  }
  return sum - series;
}

MollifierValue log_mollifier(const MollifierParams& params, std::complex<double> z) {
  params.validate();
  const CosineProduct cp(params.C_const, params.N_prime);
  MollifierValue out;
  if (z.real() == 0.0 && z.imag() >= 0.0) {
    out.modulus = LogValue::from_log(cp.log_P_imag(z.imag()));
    return out;
  }
  if (z.imag() == 0.0) {
    int sign = 1;
    const double l = cp.log_abs_real(z.real(), sign);
    if (sign == 0) return {LogValue::zero(), 0.0};
    out.modulus = LogValue::from_log(l);
    out.phase = std::remainder(z.real() * params.T_prime / 2.0 + (sign < 0 ? std::numbers::pi : 0.0),
                               2.0 * std::numbers::pi);
    return out;
  }
  const double l = cp.log_abs_P(z);
  if (!std::isfinite(l)) return {LogValue::zero(), 0.0};
  out.modulus = LogValue::from_log(l);
  out.phase = cp.arg_P(z);
  return out;
}

WeierstrassValue log_weierstrass(const spectra::Spectrum& s, const spectra::GapProfile& p, int m,
                                 std::complex<double> z, int truncation_K) {
  const int N = static_cast<int>(s.size());
  const int K = truncation_K == 0 ? N : truncation_K;
  require(K <= N, "truncation_K exceeds the spectrum truncation", ErrorKind::invalid_argument);
  require(m >= 1 && m <= K, "index m out of range", ErrorKind::invalid_argument);
  const auto lam = s.values();
  const double lm = lam[m - 1];
  const std::complex<double> num = std::complex<double>(0.0, 1.0) * z - lm;
  double log_abs = 0.0, phase = 0.0;
  bool zero = false;
  for (int k = 1; k <= K; ++k) {
    if (k == m) continue;
    const double d = lam[k - 1] - lm;
    const std::complex<double> w = num / d;
    const std::complex<double> w2 = w * w;
    const double q = -2.0 * w2.real() + std::norm(w2);
    if (q <= -1.0) {
      zero = true;
      continue;
    }
    log_abs += 0.5 * std::log1p(q);
    phase += std::arg(1.0 - w2);
  }
  WeierstrassValue out;
  out.value = zero ? LogValue::zero() : LogValue::from_log(log_abs);
  out.phase = std::remainder(phase, 2.0 * std::numbers::pi);
  // Omitted factors k > K: sum |w_k|^2 <= |iz - lambda_m|^2 / ((1 - lambda_m/a^2)^2 3 gamma a^3), a = sqrt(lambda_K),
  // and |ln|1 - w^2|| <= 2|w|^2 once |w|^2 <= 1/2.
  const double g = p.gamma_min_star;
  const double a = std::sqrt(lam[K - 1]);
  if (K <= m || K < p.n_star_upper || !(g > 0.0)) {
    out.log_tail_bound = kInf;
    return out;
  }
  const double n2 = std::norm(num);
  const double first = n2 / std::pow((a + g) * (a + g) - lm, 2);
  if (first > 0.5) {
    out.log_tail_bound = kInf;
    return out;
  }
  const double shrink = 1.0 - lm / (a * a);
  out.log_tail_bound = 2.0 * n2 / (shrink * shrink * 3.0 * g * a * a * a);
  return out;
}

}  // namespace biortho::sai
