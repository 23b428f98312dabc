#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "biortho/core/errors.hpp"
#include "sai_internal.hpp"

namespace biortho::sai {

namespace detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kMaxNodes = 20'000'000;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}
}  // namespace

Integrand::Integrand(const spectra::Spectrum& s, int m, const MollifierParams& params)
    : cp_(params.C_const, params.N_prime) {
  params.validate();
  const int N = static_cast<int>(s.size());
  const int K = params.truncation_K == 0 ? N : params.truncation_K;
  require(K <= N, "truncation_K exceeds the spectrum truncation", ErrorKind::invalid_argument);
  require(m >= 1 && m <= K, "index m out of range", ErrorKind::invalid_argument);
  lm_ = s.lambda(m);
  for (int k = 1; k <= K; ++k)
    if (k != m) d_.push_back(s.lambda(k) - lm_);
  log_P_im_ = cp_.log_P_imag(lm_);
}

double Integrand::log_abs_F(double x) const {
  const double x2 = x * x, l2 = lm_ * lm_;
  double sum = 0.0;
  for (double d : d_) {
    const double id2 = 1.0 / (d * d);
    const double r = (x2 + l2) * id2;
    // |1 - w^2|^2 = 1 - 2 Re w^2 + |w|^4, Re w^2 = (lambda_m^2 - x^2) / d^2
    sum += 0.5 * std::log1p(-2.0 * (l2 - x2) * id2 + r * r);
  }
  return sum;
}

double Integrand::log_abs_f(double x, int& sign) const {
  const double lc = cp_.log_abs_real(x, sign);
  if (sign == 0) return -kInf;
  return log_abs_F(x) + lc - log_P_im_;
}

double Integrand::log_tail(double X, double delta, int power, double log_reference) const {
  double total = -kInf;
  double a = X, prev = kInf, streak = -1.0;
  for (long panel = 0; panel < 200000; ++panel) {
    const double b = a + std::max(delta, 0.02 * a);
    if (cp_.C() * b > 1e16) return kInf;
    // |F| is increasing on the real axis.
    const double env = log_abs_F(b) + cp_.log_abs_real_bound(a, b) - log_P_im_;
    const double term = std::log(2.0 * (b - a + delta)) + power * env;
    total = log_add(total, term);
    const double floor = std::max(total, log_reference) - 46.0;
    if (term < floor && term <= prev) {
      if (streak < 0.0) streak = a;
      if (b >= 10.0 * streak && b - streak > 100.0 * delta) return total;
    } else {
      streak = -1.0;
    }
    prev = term;
    a = b;
  }
  return kInf;
}

Scan scan_integrand(const Integrand& f, double delta, double tail_tolerance, const StopRule& extra_stop) {
  Scan out;
  out.delta = delta;
  out.log_peak = -kInf;
  double acc = -kInf;
  const double log_tol = std::log(tail_tolerance);
  long next_check = 32;
  for (long j = 0; j < kMaxNodes; ++j) {
    const double x = j * delta;
    int sign = 0;
    const double lf = f.log_abs_f(x, sign);
    out.log_f.push_back(lf);
    out.sign.push_back(sign);
    if (sign != 0) {
      acc = log_add(acc, 2.0 * lf + std::log((j == 0 ? 1.0 : 2.0) * delta));
      out.log_peak = std::max(out.log_peak, lf);
    }
    if (j < next_check) continue;
    // Only try to certify once the sampled terms are already negligible.
    if (2.0 * lf + std::log(2.0 * delta) > acc + log_tol) continue;
    next_check = j + std::max<long>(32, j / 8);
    const double tail = f.log_tail(x, delta, 2, acc);
    if (tail - acc > log_tol) continue;
    if (!extra_stop(out, x)) continue;
    out.log_integral = acc;
    out.log_tail_ratio = tail - acc;
    return out;
  }
  fail(ErrorKind::non_convergence, "integrand tail could not be certified");
}

}  // namespace detail

NormReport sai_norm_report(const spectra::Spectrum& s, const spectra::GapProfile& p, int m, double T,
                           const MollifierParams& params, double tail_tolerance) {
  require(T > 0.0, "T must be positive", ErrorKind::invalid_argument);
  require(params.T_prime <= T * (1.0 + 1e-12), "T' must not exceed T", ErrorKind::invalid_argument);
  p.validate();
  const detail::Integrand f(s, m, params);
  // |f|^2 has spectrum in [-T', T']: the trapezoid rule with step pi/T' is exact.
  const double delta = std::numbers::pi / params.T_prime;
  const detail::Scan sc = detail::scan_integrand(f, delta, tail_tolerance, [](const detail::Scan&, double) {
    return true;
  });
  NormReport r;
  const double log_sq = -2.0 * f.lambda_m() * T - std::log(2.0 * std::numbers::pi) + sc.log_integral;
  r.norm = LogValue::from_log(0.5 * log_sq);
  r.x_cut = delta * (static_cast<double>(sc.log_f.size()) - 1.0);
  r.nodes = static_cast<int>(sc.log_f.size());
  r.log_tail_ratio = sc.log_tail_ratio;
  r.log_P_im = f.log_P_im();
  r.log_peak = sc.log_peak;
  return r;
}

LogValue sai_norm(const spectra::Spectrum& s, const spectra::GapProfile& p, int m, double T,
                  const MollifierParams& params) {
  return sai_norm_report(s, p, m, T, params).norm;
}

}  // namespace biortho::sai
