#include "biortho/core/special.hpp"

#include <cmath>

#include "biortho/core/errors.hpp"

namespace biortho {

BigFloat zeta_tail(unsigned long s, long K, Bits bits) {
  require(s >= 2, "zeta_tail needs s >= 2", ErrorKind::invalid_argument);
  require(K >= 0, "zeta_tail needs K >= 0", ErrorKind::invalid_argument);
  const Bits wb = bits + 16;
  // The Euler-Maclaurin terms shrink like ((s + 2p) / (2 pi a))^2, so start the
  // asymptotic part far enough out.
  const long need = static_cast<long>(s) + static_cast<long>(wb / 4) + 8;
  const long a0 = std::max(K + 1, need);
  BigFloat head(wb);
  for (long k = K + 1; k < a0; ++k) head += pow(BigFloat(k, wb), -static_cast<long>(s));

  const BigFloat a(a0, wb);
  const BigFloat inv_a2 = 1.0 / (a * a);
  BigFloat apow = pow(a, -static_cast<long>(s));  // a^{-s}
  BigFloat sum = apow * a / static_cast<double>(s - 1) + apow / 2.0;

  const BigFloat two_pi_sq = [&] {
    BigFloat tp = BigFloat::pi(wb) * 2.0;
    return tp * tp;
  }();
  const BigFloat eps = pow(BigFloat(2.0, wb), -static_cast<long>(wb));
  // rising = s (s+1) ... (s+2p-2), term_p = (-1)^{p+1} 2 zeta(2p) / (2 pi)^{2p} * rising * a^{-s-2p+1}
  BigFloat rising(static_cast<double>(s), wb);
  BigFloat inv_tp_pow = 1.0 / two_pi_sq;
  BigFloat a_term = apow / a;  // a^{-s-1}
  BigFloat prev_mag = BigFloat::infinity(1, wb);
  for (int p = 1; p < 4 * static_cast<int>(wb); ++p) {
    BigFloat term = zeta(2 * p, wb) * 2.0 * inv_tp_pow * rising * a_term;
    if (p % 2 == 0) term = -term;
    const BigFloat mag = abs(term);
    require(mag < prev_mag, "zeta_tail asymptotic series diverged", ErrorKind::non_convergence);
    sum += term;
    if (mag <= eps * abs(sum)) break;
    prev_mag = mag;
    rising *= static_cast<double>(s + 2 * p - 1);
    rising *= static_cast<double>(s + 2 * p);
    inv_tp_pow /= two_pi_sq;
    a_term *= inv_a2;
  }
  return BigFloat(head + sum, bits);
}

std::vector<BigFloat> log_cos_coefficients(int J, Bits bits) {
  // c_j = (4^j - 1) zeta(2j) / (j pi^{2j})
  std::vector<BigFloat> c;
  c.reserve(J);
  const BigFloat pi2 = [&] {
    BigFloat p = BigFloat::pi(bits);
    return p * p;
  }();
  BigFloat pipow = pi2;
  BigFloat four(4.0, bits);
  BigFloat fourpow = four;
  for (int j = 1; j <= J; ++j) {
    c.push_back((fourpow - 1.0) * zeta(2 * j, bits) / (pipow * static_cast<double>(j)));
    pipow *= pi2;
    fourpow *= four;
  }
  return c;
}

QuadratureRule gauss_legendre(int n) {
  require(n >= 1, "quadrature needs at least one node", ErrorKind::invalid_argument);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(static_cast<double>(dx)) < 1e-19) break;
    }
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const double w = static_cast<double>(2 / ((1 - x * x) * dp * dp));
    rule.nodes[i] = -static_cast<double>(x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace biortho
