#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "biortho/core/errors.hpp"
#include "biortho/core/special.hpp"
#include "sai_internal.hpp"

namespace biortho::sai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |W_n(x)| = |2 sinh((lambda_n + ix) T/2) / (lambda_n + ix)| <= 2 cosh(lambda_n T/2) max(1, T cosh(T/2)).
double log_W_bound(double lambda_n, double T) {
  const double h = lambda_n * T / 2.0;
  return h + std::log1p(std::exp(-2.0 * h)) + std::log(std::max(1.0, T * std::cosh(T / 2.0)));
}

// Extended-precision prod_{k >= N'} cos(a_k x_j), x_j = j pi / T, j = 0..J. Factors up
// to Kb by a Chebyshev recurrence in j, the rest through the ln cos series.
struct MpMollifier {
  Bits bits;
  long Kb;
  BigFloat C;
  BigFloat delta;
  BigFloat half_T_prime;  // C sum_{k >= N'} k^{-2}
  std::vector<BigFloat> c, z;
  BigFloat zeta2;
  std::vector<BigFloat> products;

  MpMollifier(double C_d, int Np, double T, long J, double x_extra, Bits b) : bits(b), C(C_d, b) {
    delta = BigFloat::pi(bits) / T;
    const double x_max = std::max(J * std::numbers::pi / T, x_extra);
    // r = C x / (Kb+1)^2 <= 1/2 for every argument used.
    Kb = std::max<long>(Np - 1, static_cast<long>(std::ceil(std::sqrt(2.0 * C_d * x_max))));
    half_T_prime = C * zeta_tail(2, Np - 1, bits);
    zeta2 = zeta_tail(2, Kb, bits);
    const int I = static_cast<int>(bits / 3) + 8;
    c = log_cos_coefficients(I, bits);
    const BigFloat k1(Kb + 1, bits);
    for (int i = 1; i <= I; ++i) z.push_back(pow(k1, 4L * i) * zeta_tail(4UL * i, Kb, bits));

    const Bits wb = bits + 64;
    const long n_explicit = Kb - Np + 1;
    std::vector<BigFloat> prev, cur, two_cos;
    prev.reserve(n_explicit);
    cur.reserve(n_explicit);
    two_cos.reserve(n_explicit);
    const BigFloat C_w(C_d, wb);
    const BigFloat delta_w = BigFloat::pi(wb) / T;
    for (long k = Np; k <= Kb; ++k) {
      const BigFloat theta = C_w * delta_w / (static_cast<double>(k) * static_cast<double>(k));
      BigFloat ct = cos(theta);
      prev.push_back(ct);  // cos(-theta)
      cur.emplace_back(1.0, wb);
      two_cos.push_back(ct * 2.0);
    }
    BigFloat prod(wb), next(wb);
    products.reserve(J + 1);
    const BigFloat inv_k1sq = C / (k1 * k1);
    for (long j = 0; j <= J; ++j) {
      mpfr_set_ui(prod.get(), 1, MPFR_RNDN);
      for (long i = 0; i < n_explicit; ++i) {
        mpfr_mul(prod.get(), prod.get(), cur[i].get(), MPFR_RNDN);
        mpfr_mul(next.get(), two_cos[i].get(), cur[i].get(), MPFR_RNDN);
        mpfr_sub(next.get(), next.get(), prev[i].get(), MPFR_RNDN);
        prev[i].swap(cur[i]);
        cur[i].swap(next);
      }
      const BigFloat r = inv_k1sq * delta * static_cast<double>(j);
      products.push_back(BigFloat(prod, bits) * exp(-series(r, false)));
    }
  }

  // sum_i c_i (+-1)^i r^{2i} z_i; alternating for the imaginary axis.
  BigFloat series(const BigFloat& r, bool alternating) const {
    const BigFloat r2 = r * r;
    BigFloat rp = r2, sum(bits);
    const BigFloat eps = pow(BigFloat(2.0, bits), -static_cast<long>(bits) - 8);
    for (std::size_t i = 0; i < c.size(); ++i) {
      BigFloat term = c[i] * rp * z[i];
      if (alternating && i % 2 == 0) term = -term;
      sum += term;
      if (abs(term) <= eps) break;
      rp *= r2;
    }
    return sum;
  }

  // ln P(i y) = sum_k (ln cosh(a_k y) - a_k y).
  BigFloat log_P_imag(double y, int Np) const {
    const BigFloat yb(y, bits);
    const BigFloat ln2 = log(BigFloat(2.0, bits));
    BigFloat sum(bits);
    for (long k = Np; k <= Kb; ++k) {
      const BigFloat w = C * yb / (static_cast<double>(k) * static_cast<double>(k));
      sum += log1p(exp(-(w * 2.0))) - ln2;
    }
    const BigFloat k1(Kb + 1, bits);
    // ln cosh w = -sum_i c_i (-1)^i w^{2i}
    sum -= series(C * yb / (k1 * k1), true);
    return sum - yb * C * zeta2;
  }
};

struct IndexWork {
  int m = 0;
  double lambda_m = 0.0;
  double log_scale = 0.0;  // ln max |h_j|
  long J = 0;
  NormReport parseval;
};

}  // namespace

BiorthogonalFamily sai_family(const spectra::Spectrum& s, const spectra::GapProfile& p,
                              const std::vector<int>& indices, double T, const MollifierParams& params,
                              const PrecisionContext& ctx, double tolerance, FamilyDiagnostics* diagnostics) {
  require(!indices.empty(), "sai_family needs at least one index", ErrorKind::invalid_argument);
  require(T > 0.0, "T must be positive", ErrorKind::invalid_argument);
  require(tolerance > 0.0, "tolerance must be positive", ErrorKind::invalid_argument);
  ctx.validate();
  params.validate();
  p.validate();
  const int K = params.truncation_K == 0 ? static_cast<int>(s.size()) : params.truncation_K;
  for (int m : indices) require(m >= 1 && m <= K, "index out of range", ErrorKind::invalid_argument);

  // Residual sums use step pi/T: h W_n has spectrum in [-T, T].
  const double delta = std::numbers::pi / T;
  const double log_target = std::log(tolerance * 1e-3);
  double lambda_max = 0.0, log_W_max = -kInf;
  for (int n : indices) {
    lambda_max = std::max(lambda_max, s.lambda(n));
    log_W_max = std::max(log_W_max, s.lambda(n) * T / 2.0 + log_W_bound(s.lambda(n), T));
  }

  std::vector<IndexWork> work;
  long J_max = 0;
  double log_term_max = -kInf;
  for (int m : indices) {
    const detail::Integrand f(s, m, params);
    IndexWork w;
    w.m = m;
    w.lambda_m = f.lambda_m();
    const double log_scale_res = std::log(delta / std::numbers::pi) - w.lambda_m * T + log_W_max;
    const detail::Scan sc = detail::scan_integrand(f, delta, 1e-12, [&](const detail::Scan&, double x) {
      const double ref = log_target - log_scale_res + std::log(2.0 * delta);
      const double tail = f.log_tail(x, delta, 1, ref);
      return tail - std::log(2.0 * delta) + log_scale_res < log_target;
    });
    w.J = static_cast<long>(sc.log_f.size()) - 1;
    w.log_scale = sc.log_peak;
    w.parseval = sai_norm_report(s, p, m, T, params);
    J_max = std::max(J_max, w.J);
    log_term_max = std::max(log_term_max, log_scale_res + sc.log_peak);
    work.push_back(w);
  }

  const Bits base_bits = std::max<Bits>(
      ctx.bits(), static_cast<Bits>(std::ceil((log_term_max - log_target) / std::numbers::ln2 +
                                              std::log2(static_cast<double>(J_max) + 1.0))) + 64);

  BiorthogonalFamily fam;
  fam.method = FamilyMethod::sai;
  fam.horizon = T;
  fam.indices = indices;
  fam.tolerance = tolerance;

  std::vector<std::vector<std::complex<double>>> h_scaled(indices.size());
  Bits bits = base_bits;
  std::vector<int> bits_used(indices.size(), 0);
  double T_eff = params.T_prime;
  for (int attempt = 0;; ++attempt) {
    const MpMollifier mol(params.C_const, params.N_prime, T, J_max, lambda_max, bits);
    T_eff = (mol.half_T_prime * 2.0).to_double();
    // W_n(x_j): (lambda_n + i x_j) T / 2 has imaginary part j pi / 2, so sin and cos cycle exactly.
    std::vector<std::vector<BigComplex>> W(indices.size());
    for (std::size_t in = 0; in < indices.size(); ++in) {
      const BigFloat ln(s.lambda(indices[in]), bits);
      const BigFloat a = ln * (T / 2.0);
      const BigFloat sh = sinh(a), ch = cosh(a);
      for (long j = 0; j <= J_max; ++j) {
        BigComplex num(bits);
        switch (j % 4) {
          case 0: num = BigComplex(sh, BigFloat(bits)); break;
          case 1: num = BigComplex(BigFloat(bits), ch); break;
          case 2: num = BigComplex(-sh, BigFloat(bits)); break;
          default: num = BigComplex(BigFloat(bits), -ch); break;
        }
        const BigComplex den(ln, mol.delta * static_cast<double>(j));
        W[in].push_back(num * BigFloat(2.0, bits) / den);
      }
    }
    fam.residuals.assign(indices.size(), std::vector<double>(indices.size(), 0.0));
    double worst = 0.0;
    for (std::size_t im = 0; im < indices.size(); ++im) {
      const IndexWork& w = work[im];
      const BigFloat lm(w.lambda_m, bits);
      const BigFloat inv_P = exp(-mol.log_P_imag(w.lambda_m, params.N_prime));
      std::vector<BigFloat> d2;
      for (int k = 1; k <= K; ++k) {
        if (k == w.m) continue;
        const BigFloat d = BigFloat(s.lambda(k), bits) - lm;
        d2.push_back(d * d);
      }
      const BigFloat lm2 = lm * lm;
      const BigFloat two_lm = lm * 2.0;
      const BigFloat shift = (mol.half_T_prime - BigFloat(T, bits) / 2.0);
      std::vector<BigComplex> h;
      h.reserve(w.J + 1);
      for (long j = 0; j <= w.J; ++j) {
        const BigFloat x = mol.delta * static_cast<double>(j);
        const BigFloat x2 = x * x;
        // F(x) = prod (1 - w^2), 1 - w^2 = ((d^2 - lambda_m^2 + x^2) + 2 i lambda_m x) / d^2
        BigComplex F(1.0, 0.0, bits);
        const BigFloat im_part = two_lm * x;
        for (const BigFloat& dd : d2) F *= BigComplex((dd - lm2 + x2) / dd, im_part / dd);
        // h(x) = conj F(x) e^{i x (T' - T)/2} prod cos(a_k x) / P(i lambda_m)
        BigComplex hj = F.conj() * expi(x * shift);
        hj *= mol.products[j] * inv_P;
        h.push_back(std::move(hj));
      }
      const BigFloat pref_base = exp(BigFloat(-w.lambda_m * T, bits)) * (mol.delta / BigFloat::pi(bits));
      for (std::size_t in = 0; in < indices.size(); ++in) {
        BigFloat acc = (h[0] * W[in][0]).re / 2.0;
        for (long j = 1; j <= w.J; ++j) {
          const BigComplex& a = h[j];
          const BigComplex& b = W[in][j];
          acc += a.re * b.re - a.im * b.im;
        }
        BigFloat r = pref_base * exp(BigFloat(s.lambda(indices[in]) * T / 2.0, bits)) * acc;
        if (indices[in] == w.m) r -= 1.0;
        fam.residuals[im][in] = std::fabs(r.to_double());
        worst = std::max(worst, fam.residuals[im][in]);
      }
      const BigFloat descale = exp(BigFloat(-w.log_scale, bits));
      h_scaled[im].clear();
      for (const BigComplex& hj : h)
        h_scaled[im].emplace_back((hj.re * descale).to_double(), (hj.im * descale).to_double());
      bits_used[im] = static_cast<int>(bits);
    }
    if (worst <= tolerance) break;
    if (attempt >= ctx.max_escalations)
      fail(ErrorKind::precision_exhausted, "sai_family residual " + std::to_string(worst) + " above tolerance");
    bits *= ctx.escalation_factor;
  }

  // phi(xi) = (delta / 2 pi) [h_0 + 2 Re sum_j h_j e^{-i xi x_j}], supported in [-T/2, -T/2 + T'].
  auto phi = [&](const std::vector<std::complex<double>>& h, double xi) {
    double acc = 0.0;
    for (std::size_t j = h.size() - 1; j >= 1; --j) {
      const double ang = xi * delta * static_cast<double>(j);
      acc += h[j].real() * std::cos(ang) + h[j].imag() * std::sin(ang);
    }
    return delta / (2.0 * std::numbers::pi) * (h[0].real() + 2.0 * acc);
  };
  const double lo = -T / 2.0, hi = std::min(T / 2.0, -T / 2.0 + T_eff);
  const double mid = (lo + hi) / 2.0, half = (hi - lo) / 2.0;
  auto integrate = [&](const std::vector<std::complex<double>>& h, int n) {
    const QuadratureRule q = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = phi(h, mid + half * q.nodes[i]);
      acc += q.weights[i] * v * v;
    }
    return acc * half;
  };
  int n_final = 32;
  for (std::size_t im = 0; im < indices.size(); ++im) {
    int n = 32;
    double prev = integrate(h_scaled[im], n);
    for (;;) {
      require(n <= 8192, "time-domain quadrature did not converge", ErrorKind::non_convergence);
      const double next = integrate(h_scaled[im], 2 * n);
      n *= 2;
      if (std::fabs(next - prev) <= 1e-12 * std::fabs(next)) break;
      prev = next;
    }
    n_final = std::max(n_final, n);
  }

  const QuadratureRule q = gauss_legendre(n_final);
  for (int i = 0; i < n_final; ++i) {
    fam.sample_times.push_back(T / 2.0 - (mid + half * q.nodes[i]));
    fam.sample_weights.push_back(half * q.weights[i]);
  }
  FamilyDiagnostics diag;
  for (std::size_t im = 0; im < indices.size(); ++im) {
    const IndexWork& w = work[im];
    std::vector<BigFloat> samples;
    double integral = 0.0, peak = 0.0;
    const BigFloat factor = exp(BigFloat(w.log_scale - w.lambda_m * T, 64));
    for (int i = 0; i < n_final; ++i) {
      const double v = phi(h_scaled[im], mid + half * q.nodes[i]);
      integral += half * q.weights[i] * v * v;
      peak = std::max(peak, std::fabs(v));
      samples.push_back(BigFloat(v, 64) * factor);
    }
    fam.coefficients.push_back(std::move(samples));
    const double log_sq = -2.0 * w.lambda_m * T + 2.0 * w.log_scale + std::log(integral);
    fam.norms.push_back(LogValue::from_log(0.5 * log_sq));
    const double parseval_sq = 2.0 * w.parseval.norm.log_double();
    diag.parseval_relative_gap.push_back(std::fabs(std::expm1(log_sq - parseval_sq)));
    const double leak = std::max(std::fabs(phi(h_scaled[im], 0.55 * T)), std::fabs(phi(h_scaled[im], -0.55 * T)));
    diag.support_leak.push_back(peak > 0.0 ? leak / peak : kInf);
    diag.bits_used.push_back(bits_used[im]);
    diag.nodes.push_back(static_cast<int>(w.J + 1));
  }
  if (diagnostics != nullptr) *diagnostics = std::move(diag);
  return fam;
}

}  // namespace biortho::sai
