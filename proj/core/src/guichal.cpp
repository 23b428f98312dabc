#include "biortho/guichal/guichal.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "biortho/core/errors.hpp"
#include "biortho/core/format.hpp"

namespace biortho::guichal {

namespace {

BigFloat from_q(const mpq_class& q, Bits bits) {
  BigFloat r(bits);
  mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

BigFloat lnfact(long n, Bits bits) { return log_factorial(n, bits); }

long floor_of(const BigFloat& x) { return floor(x).to_long_floor(); }

void require_increasing_q(std::span<const mpq_class> l) {
  require(!l.empty(), "Guichal sum needs at least one exponent", ErrorKind::invalid_argument);
  for (std::size_t i = 1; i < l.size(); ++i) {
    require(l[i - 1] != l[i], "duplicate exponent in Guichal sum", ErrorKind::invalid_argument);
    require(l[i - 1] < l[i], "Guichal exponents must be increasing", ErrorKind::invalid_argument);
  }
}

}  // namespace

BigFloat GuichalSum::coefficient(std::size_t k, Bits bits) const {
  if (exact) return from_q(coefficients_q[k], bits);
  BigFloat prod(1L, bits);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (i == k) continue;
    prod *= BigFloat(lambdas[i], bits) - BigFloat(lambdas[k], bits);
  }
  return BigFloat(1L, bits) / prod;
}

GuichalSum guichal_coefficients(std::span<const mpq_class> lambdas, Bits bits) {
  require_increasing_q(lambdas);
  GuichalSum g;
  g.M = static_cast<int>(lambdas.size()) - 1;
  g.exact = true;
  g.lambdas_q.assign(lambdas.begin(), lambdas.end());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    mpq_class prod = 1;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (i != k) prod *= lambdas[i] - lambdas[k];
    }
    g.coefficients_q.push_back(1 / prod);
    g.lambdas.push_back(from_q(lambdas[k], std::max<Bits>(bits, 64)));
    g.coefficients.push_back(from_q(g.coefficients_q.back(), bits));
  }
  return g;
}

GuichalSum guichal_coefficients(std::span<const double> lambdas, Bits bits) {
  std::vector<mpq_class> q;
  q.reserve(lambdas.size());
  for (double l : lambdas) {
    require(std::isfinite(l), "Guichal exponent must be finite", ErrorKind::invalid_argument);
    q.emplace_back(l);
  }
  return guichal_coefficients(std::span<const mpq_class>(q), bits);
}

GuichalSum guichal_coefficients(std::span<const BigFloat> lambdas) {
  require(!lambdas.empty(), "Guichal sum needs at least one exponent", ErrorKind::invalid_argument);
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    require(!(lambdas[i - 1] == lambdas[i]), "duplicate exponent in Guichal sum", ErrorKind::invalid_argument);
    require(lambdas[i - 1] < lambdas[i], "Guichal exponents must be increasing", ErrorKind::invalid_argument);
  }
  GuichalSum g;
  g.M = static_cast<int>(lambdas.size()) - 1;
  g.lambdas.assign(lambdas.begin(), lambdas.end());
  Bits bits = 64;
  for (const BigFloat& l : lambdas) bits = std::max(bits, l.bits());
  for (std::size_t k = 0; k < lambdas.size(); ++k) g.coefficients.push_back(g.coefficient(k, bits));
  return g;
}

std::vector<mpq_class> jet_defects_exact(const GuichalSum& g) {
  require(g.exact, "exact jet defects need a rational Guichal sum", ErrorKind::invalid_argument);
  std::vector<mpq_class> out;
  const std::size_t n = g.lambdas_q.size();
  std::vector<mpq_class> power(n, mpq_class(1));
  for (int j = 0; j <= g.M; ++j) {
    mpq_class acc = j == g.M ? -1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += g.coefficients_q[i] * power[i];
      power[i] *= -g.lambdas_q[i];
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<BigFloat> jet_defects(const GuichalSum& g, Bits bits) {
  std::vector<BigFloat> out;
  const std::size_t n = g.lambdas.size();
  std::vector<BigFloat> power(n, BigFloat(1L, bits));
  std::vector<BigFloat> coef;
  for (std::size_t i = 0; i < n; ++i) coef.push_back(g.coefficient(i, bits));
  for (int j = 0; j <= g.M; ++j) {
    BigFloat acc(j == g.M ? -1L : 0L, bits);
    for (std::size_t i = 0; i < n; ++i) {
      acc += coef[i] * power[i];
      power[i] *= -BigFloat(g.lambdas[i], bits);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

BigFloat q_eval(const GuichalSum& g, double s, Bits bits) {
  require(s >= 0.0 && std::isfinite(s), "q_eval needs s >= 0", ErrorKind::invalid_argument);
  // The jet conditions make q vanish to order M at the origin.
  if (s == 0.0) return BigFloat(g.M == 0 ? 1L : 0L, bits);
  Bits work = bits + 32;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const BigFloat sv(s, work);
    BigFloat sum(work), mag(work);
    for (std::size_t k = 0; k < g.lambdas.size(); ++k) {
      const BigFloat lam = g.exact ? from_q(g.lambdas_q[k], work) : BigFloat(g.lambdas[k], work);
      const BigFloat term = g.coefficient(k, work) * exp(-(lam * sv));
      sum += term;
      mag += abs(term);
    }
    // Bits lost to cancellation: log2(sum |terms| / |sum|).
    const double lost = sum.is_zero() ? static_cast<double>(work)
                                      : (log(mag / abs(sum)) / std::log(2.0)).to_double();
    if (static_cast<double>(work) - lost >= static_cast<double>(bits) + 16) return BigFloat(sum, bits);
    work = bits + 48 + static_cast<Bits>(std::ceil(lost)) * (attempt + 1);
  }
  fail(ErrorKind::precision_exhausted, "q_eval: cancellation not resolved at s=" + format_sci(s));
}

BigFloat q_envelope(const GuichalSum& g, double s, Bits bits) {
  const BigFloat sv(s, bits);
  const BigFloat l1 = g.exact ? from_q(g.lambdas_q[0], bits) : BigFloat(g.lambdas[0], bits);
  return pow(sv, static_cast<long>(g.M)) * exp(-(l1 * sv) - lnfact(g.M, bits));
}

BigFloat log_lower_gamma(const BigFloat& a, const BigFloat& x) {
  const Bits bits = std::max(a.bits(), x.bits());
  require(a > 0.0 && x >= 0.0, "lower incomplete gamma needs a > 0, x >= 0", ErrorKind::invalid_argument);
  if (x.is_zero()) return BigFloat::infinity(-1, bits);
  const Bits work = bits + 32;
  const BigFloat aw(a, work), xw(x, work);
  if (x <= a + 1.0) {
    // gamma(a, x) = x^a e^{-x} sum_k x^k / (a (a+1) ... (a+k)); positive terms, ratio < 1.
    BigFloat term = BigFloat(1L, work) / aw;
    BigFloat sum = term;
    for (long k = 1;; ++k) {
      term *= xw / (aw + static_cast<double>(k));
      sum += term;
      if (term < sum * std::ldexp(1.0, -static_cast<int>(work))) break;
    }
    return BigFloat(aw * log(xw) - xw + log(sum), bits);
  }
  // Past the peak the upper tail is at most about half of Gamma(a): no cancellation.
  BigFloat full(work), upper(work);
  mpfr_gamma(full.get(), aw.get(), MPFR_RNDN);
  mpfr_gamma_inc(upper.get(), aw.get(), xw.get(), MPFR_RNDN);
  if (full.is_inf()) {
    // Gamma(a) overflows the exponent range only for astronomically large a.
    fail(ErrorKind::precision_exhausted, "lower incomplete gamma: Gamma(a) overflow");
  }
  return BigFloat(log(full - upper), bits);
}

MomentIntegral moment_integral(int M, double lambda1, double T, Bits bits) {
  require(M >= 0, "moment order must be >= 0", ErrorKind::invalid_argument);
  require(lambda1 >= 0.0, "lambda_1 must be >= 0", ErrorKind::invalid_argument);
  require(T > 0.0, "horizon T must be positive", ErrorKind::invalid_argument);
  const Bits work = bits + 32;
  const BigFloat t(T, work), l(lambda1, work);
  const long a = 2L * M + 1;
  BigFloat log_int(work);
  if (lambda1 == 0.0) {
    log_int = static_cast<double>(a) * log(t) - log(BigFloat(a, work)) - 2.0 * lnfact(M, work);
  } else {
    const BigFloat two_l = 2.0 * l;
    log_int = log_lower_gamma(BigFloat(a, work), two_l * t) - static_cast<double>(a) * log(two_l) -
              2.0 * lnfact(M, work);
  }
  MomentIntegral r;
  r.exact = LogValue(BigFloat(log_int / 2.0, bits), 1);
  // T^M / M! sqrt(2T) / sqrt(2M + 1 + 2 T lambda_1)
  const BigFloat closed = static_cast<double>(M) * log(t) - lnfact(M, work) + log(2.0 * t) / 2.0 -
                          log(static_cast<double>(a) + 2.0 * t * l) / 2.0;
  r.closed_bound = LogValue(BigFloat(closed, bits), 1);
  return r;
}

double tail_constant_c1() {
  static const double c1 = [] {
    auto neg = [](double x) { return std::expm1(-x) * (1.0 + x) / x; };
    const auto best = boost::math::tools::brent_find_minima(neg, 1e-3, 20.0, std::numeric_limits<double>::digits);
    const Bits b = 160;
    const BigFloat x(best.first, b);
    return (-expm1(-x) * (x + 1.0) / x).to_double();
  }();
  return c1;
}

ExpTail exp_tail(int N, double x, Bits bits) {
  require(N >= 1, "exp_tail needs N >= 1", ErrorKind::invalid_argument);
  require(x >= 0.0 && std::isfinite(x), "exp_tail needs x >= 0", ErrorKind::invalid_argument);
  ExpTail r;
  if (x == 0.0) {
    r.value = r.lower = r.upper = LogValue::zero(bits);
    return r;
  }
  const Bits work = bits + 32;
  const BigFloat xv(x, work);
  // sum_{n >= N} x^n / n! = e^x gamma(N, x) / (N-1)!
  const BigFloat lv = xv + log_lower_gamma(BigFloat(static_cast<long>(N), work), xv) - lnfact(N - 1, work);
  const BigFloat shape = static_cast<double>(N) * (log(xv) - log1p(xv)) + xv;
  r.value = LogValue(BigFloat(lv, bits), 1);
  r.lower = LogValue(BigFloat(shape - lnfact(N, work), bits), 1);
  r.upper = LogValue(BigFloat(shape + std::log(tail_constant_c1() * N), bits), 1);
  return r;
}

LogValue distance_upper_bound(const spectra::Spectrum& s, double T, int m, int M, Bits bits) {
  require(m >= 1 && M >= m, "distance_upper_bound needs 1 <= m <= M", ErrorKind::invalid_argument);
  require(s.size() >= static_cast<std::size_t>(M) + 1, "spectrum truncation shorter than M+1",
          ErrorKind::truncation);
  const Bits work = bits + 32;
  const BigFloat lm(s.lambda(static_cast<std::size_t>(m)), work);
  BigFloat acc(work);
  for (int i = 1; i <= M + 1; ++i) {
    if (i == m) continue;
    acc += log(abs(BigFloat(s.lambda(static_cast<std::size_t>(i)), work) - lm));
  }
  const MomentIntegral mi = moment_integral(M, s.lambda(1), T, work);
  return LogValue(BigFloat(acc + mi.exact.log_magnitude(), bits), 1);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::one_gap: return "one_gap";
    case Regime::two_gap_m_le_nstar: return "two_gap_m_le_nstar";
    case Regime::two_gap_m_gt_nstar: return "two_gap_m_gt_nstar";
    case Regime::best_m_scan: return "best_M_scan";
  }
  return "unknown";
}

namespace {

// ln(6/pi^2) + ln sqrt(1 + 2 T lambda_1) - ln sqrt(2T): the 1/(M-m)^2 weights
// summed to pi^2/6, and the moment bound with 2M+1 >= 1.
BigFloat log_common_prefactor(double T, double lambda1, Bits bits) {
  const BigFloat t(T, bits), l(lambda1, bits);
  return log(BigFloat(6L, bits)) - 2.0 * log(BigFloat::pi(bits)) + log1p(2.0 * t * l) / 2.0 -
         log(2.0 * t) / 2.0;
}

}  // namespace

LowerBoundResult lower_bound_one_gap(double T, double gamma_max, double lambda1, int m, Bits bits) {
  require(T > 0.0 && gamma_max > 0.0, "one-gap bound needs T > 0 and gamma_max > 0", ErrorKind::invalid_argument);
  require(lambda1 > 0.0, "lower bounds need lambda_1 > 0", ErrorKind::invalid_argument);
  require(m >= 1, "index m must be >= 1", ErrorKind::invalid_argument);
  const Bits work = bits + 32;
  const BigFloat g(gamma_max, work);
  const long a1 = floor_of(2.0 * sqrt(BigFloat(lambda1, work)) / g);
  const long k = a1 + m + 2;
  const BigFloat X = BigFloat(T, work) * g * g;

  const BigFloat pre = log_common_prefactor(T, lambda1, work);
  // 1/c^(+) = (k_*-1)!, 1/c^(-) = 1/(m-1)!
  const BigFloat consts = lnfact(k - 1, work) - lnfact(m - 1, work);
  // Tail of e^{1/X} from n = m+k_*+3, bounded below by the tail lemma.
  const long n0 = m + k + 3;
  const BigFloat shape = static_cast<double>(k + 2) * log(X) - lnfact(n0, work) - static_cast<double>(n0) * log1p(X);
  const BigFloat logC = pre + consts + shape;

  LowerBoundResult r;
  r.regime = Regime::one_gap;
  r.bound_on_inverse_distance = LogValue(BigFloat(logC + 1.0 / X, bits), 1);
  r.parameters.k_star = static_cast<int>(k);
  r.parameters.log_constants = {{"log_prefactor", pre.to_double()},
                                {"log_C", logC.to_double()},
                                {"exponent", (1.0 / X).to_double()}};
  return r;
}

LowerBoundResult lower_bound_two_gap(const spectra::Spectrum& s, const spectra::GapProfile& p, double T, int m,
                                     Bits bits) {
  require(T > 0.0, "horizon T must be positive", ErrorKind::invalid_argument);
  require(m >= 1, "index m must be >= 1", ErrorKind::invalid_argument);
  const double lambda1 = s.lambda(1);
  require(lambda1 > 0.0, "lower bounds need lambda_1 > 0", ErrorKind::invalid_argument);
  require(p.gamma_max > 0.0 && p.gamma_max_star > 0.0 && p.gamma_max_star <= p.gamma_max,
          "two-gap bound needs 0 < gamma_max* <= gamma_max", ErrorKind::invalid_argument);
  const long ns = p.n_star_lower;
  require(ns >= 1, "N_* must be >= 1", ErrorKind::invalid_argument);

  const Bits work = bits + 32;
  const BigFloat g(p.gamma_max, work), gs(p.gamma_max_star, work);
  const BigFloat root = 2.0 * sqrt(BigFloat(lambda1, work));
  const BigFloat ratio_log = log(g / gs);
  const long a1 = floor_of(root / g);
  // B = [(2 sqrt(lambda_1) + (N_*+m) gamma_max) / gamma_max*], K_* = B - N_* + 2
  const long B = floor_of((root + static_cast<double>(ns + m) * g) / gs);
  const long K = B - ns + 2;
  const BigFloat X = BigFloat(T, work) * gs * gs;
  const BigFloat pre = log_common_prefactor(T, lambda1, work);

  LowerBoundResult r;
  r.parameters.K_star = static_cast<int>(K);
  BigFloat log_cplus(work), log_cminus(work), shape(work);
  long n0 = 0;
  if (m <= ns) {
    r.regime = Regime::two_gap_m_le_nstar;
    const long L = floor_of(g / gs * static_cast<double>(ns - m));
    const long Kp = L - ns + 2;
    r.parameters.K_prime_star = static_cast<int>(Kp);
    // C^(+): plus-products below N_* with gamma_max, above with gamma_max*; the i = m factor is removed.
    log_cplus = static_cast<double>(ns - 1) * ratio_log + lnfact(ns + m + a1 + 1, work) -
                lnfact(m + a1 + 1, work) - lnfact(B + 1, work) - log(BigFloat(2L * m + a1 + 1, work));
    // C^(-): (m-1)! (N_*-m)! from the first block, 1/(1+L)! from the shifted second block.
    log_cminus = static_cast<double>(ns - 1) * ratio_log + lnfact(m - 1, work) + lnfact(ns - m, work) -
                 lnfact(1 + L, work);
    n0 = ns + K + Kp + 3;
    require(n0 >= 1, "two-gap bound: tail index N_*+K_*+K'_*+3 < 1", ErrorKind::precondition);
    shape = static_cast<double>(K + Kp + 2) * log(X);
  } else {
    r.regime = Regime::two_gap_m_gt_nstar;
    log_cplus = static_cast<double>(ns) * ratio_log + lnfact(ns + m + a1 + 1, work) - lnfact(m + a1 + 1, work) -
                lnfact(B + 1, work) - log(BigFloat(m - ns + B + 1, work));
    log_cminus = static_cast<double>(ns) * ratio_log + lnfact(m - 1, work);
    n0 = m + K + 3;
    require(n0 >= 1, "two-gap bound: tail index m+K_*+3 < 1", ErrorKind::precondition);
    shape = static_cast<double>(K + 2) * log(X);
  }
  shape -= lnfact(n0, work) + static_cast<double>(n0) * log1p(X);
  const BigFloat logb = pre - log_cplus - log_cminus + shape;
  r.bound_on_inverse_distance = LogValue(BigFloat(logb + 1.0 / X, bits), 1);
  r.parameters.log_constants = {{"log_prefactor", pre.to_double()},
                                {"log_C_plus", log_cplus.to_double()},
                                {"log_C_minus", log_cminus.to_double()},
                                {"log_b_star", logb.to_double()},
                                {"exponent", (1.0 / X).to_double()}};
  return r;
}

LowerBoundResult best_lower_bound(const spectra::Spectrum& s, double T, int m, int M_lo, int M_hi, Bits bits) {
  require(M_lo >= m && M_lo <= M_hi, "M range must satisfy m <= M_lo <= M_hi", ErrorKind::invalid_argument);
  require(s.size() >= static_cast<std::size_t>(M_hi) + 1, "M range exceeds the spectrum truncation",
          ErrorKind::truncation);
  LowerBoundResult r;
  r.regime = Regime::best_m_scan;
  bool have = false;
  for (int M = M_lo; M <= M_hi; ++M) {
    LogValue v = distance_upper_bound(s, T, m, M, bits).reciprocal();
    if (!have || v > r.bound_on_inverse_distance) {
      r.bound_on_inverse_distance = std::move(v);
      r.parameters.M_used = M;
      have = true;
    }
  }
  return r;
}

RateFit fit_small_time_rate(std::span<const double> T, std::span<const double> v) {
  require(T.size() == 3 && v.size() == 3, "rate fit needs exactly three points", ErrorKind::invalid_argument);
  double A[3][3], b[3];
  for (int i = 0; i < 3; ++i) {
    require(T[i] > 0.0, "rate fit needs T > 0", ErrorKind::invalid_argument);
    A[i][0] = 1.0;
    A[i][1] = T[i];
    A[i][2] = T[i] * std::log(T[i]);
    b[i] = v[i];
  }
  auto det3 = [](double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  const double d = det3(A);
  require(d != 0.0, "rate fit points are degenerate", ErrorKind::invalid_argument);
  double c[3];
  for (int j = 0; j < 3; ++j) {
    double Aj[3][3];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) Aj[i][k] = k == j ? b[i] : A[i][k];
    c[j] = det3(Aj) / d;
  }
  return {c[0], c[1], c[2]};
}

std::string bounds_csv_header() { return "m,T,regime,log_bound,log_inverse_distance,margin\n"; }

std::string bounds_csv_row(int m, double T, const LowerBoundResult& r, const LogValue& inverse_distance) {
  const BigFloat lb = r.bound_on_inverse_distance.log_magnitude();
  const BigFloat li = inverse_distance.log_magnitude();
  return std::to_string(m) + "," + format_sci(T) + "," + to_string(r.regime) + "," + format_sci(lb) + "," +
         format_sci(li) + "," + format_sci(li - lb) + "\n";
}

}  // namespace biortho::guichal
