#include "biortho/gram/gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biortho/core/errors.hpp"
#include "biortho/core/format.hpp"

namespace biortho::gram {

BigMatrix::BigMatrix(std::size_t n, Bits bits) : n_(n), a_(n * n, BigFloat(bits)) {}

BigMatrix gram_matrix(const spectra::Spectrum& s, double T, Bits bits) {
  require(T > 0.0, "horizon T must be positive", ErrorKind::invalid_argument);
  const std::size_t n = s.size();
  BigMatrix G(n, bits);
  const BigFloat t(T, bits);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const BigFloat sum = BigFloat(s.values()[i], bits) + BigFloat(s.values()[j], bits);
      BigFloat v = sum.is_zero() ? t : -expm1(-(sum * t)) / sum;
      G(j, i) = v;
      G(i, j) = std::move(v);
    }
  }
  return G;
}

namespace {

// In-place lower Cholesky factor of A (n x n); false on a non-positive pivot.
bool cholesky(BigMatrix& A) {
  const std::size_t n = A.size();
  const Bits bits = n ? A(0, 0).bits() : 64;
  BigFloat acc(bits), tmp(bits);
  for (std::size_t j = 0; j < n; ++j) {
    mpfr_set(acc.get(), A(j, j).get(), MPFR_RNDN);
    for (std::size_t k = 0; k < j; ++k) {
      mpfr_sqr(tmp.get(), A(j, k).get(), MPFR_RNDN);
      mpfr_sub(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
    }
    if (acc.sign() <= 0) return false;
    mpfr_sqrt(A(j, j).get(), acc.get(), MPFR_RNDN);
    for (std::size_t i = j + 1; i < n; ++i) {
      mpfr_set(acc.get(), A(i, j).get(), MPFR_RNDN);
      for (std::size_t k = 0; k < j; ++k) {
        mpfr_mul(tmp.get(), A(i, k).get(), A(j, k).get(), MPFR_RNDN);
        mpfr_sub(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
      }
      mpfr_div(A(i, j).get(), acc.get(), A(j, j).get(), MPFR_RNDN);
    }
  }
  return true;
}

// Forward substitution L y = b in place.
void forward_solve(const BigMatrix& L, std::vector<BigFloat>& b) {
  const std::size_t n = L.size();
  BigFloat tmp(b.empty() ? 64 : b[0].bits());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      mpfr_mul(tmp.get(), L(i, k).get(), b[k].get(), MPFR_RNDN);
      mpfr_sub(b[i].get(), b[i].get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_div(b[i].get(), b[i].get(), L(i, i).get(), MPFR_RNDN);
  }
}

struct Schur {
  bool ok = false;
  BigFloat d2;
};

// d^2 = G_mm - g^T G_{-m}^{-1} g = G_mm - |L^{-1} g|^2 with G_{-m} = L L^T.
Schur schur_complement(const spectra::Spectrum& s, double T, int m, Bits bits) {
  const BigMatrix G = gram_matrix(s, T, bits);
  const std::size_t n = s.size();
  const std::size_t mi = static_cast<std::size_t>(m - 1);
  Schur out;
  out.d2 = G(mi, mi);
  if (n == 1) {
    out.ok = out.d2.sign() > 0;
    return out;
  }
  BigMatrix A(n - 1, bits);
  std::vector<BigFloat> g;
  g.reserve(n - 1);
  for (std::size_t i = 0, ii = 0; i < n; ++i) {
    if (i == mi) continue;
    for (std::size_t j = 0, jj = 0; j < n; ++j) {
      if (j == mi) continue;
      A(ii, jj++) = G(i, j);
    }
    g.push_back(G(i, mi));
    ++ii;
  }
  if (!cholesky(A)) return out;
  forward_solve(A, g);
  BigFloat tmp(bits);
  for (const BigFloat& y : g) {
    mpfr_sqr(tmp.get(), y.get(), MPFR_RNDN);
    mpfr_sub(out.d2.get(), out.d2.get(), tmp.get(), MPFR_RNDN);
  }
  out.ok = out.d2.sign() > 0;
  return out;
}

int guard_digits(int digits) { return std::max(20, digits / 4); }

}  // namespace

int starting_digits(const spectra::Spectrum& s, double T, const PrecisionContext& ctx) {
  (void)T;
  const int n = static_cast<int>(s.size());
  return std::max(ctx.working_digits, 20 + 2 * n);
}

DistanceResult distance(const spectra::Spectrum& s, double T, int m, const PrecisionContext& ctx) {
  ctx.validate();
  require(T > 0.0, "horizon T must be positive", ErrorKind::invalid_argument);
  require(m >= 1 && static_cast<std::size_t>(m) <= s.size(), "index m out of range", ErrorKind::invalid_argument);
  int digits = starting_digits(s, T, ctx);
  double achieved = 1.0;
  for (int attempt = 0; attempt <= ctx.max_escalations; ++attempt) {
    const int hi_digits = digits + guard_digits(digits);
    const Schur lo = schur_complement(s, T, m, bits_for_digits(digits));
    const Schur hi = schur_complement(s, T, m, bits_for_digits(hi_digits));
    if (lo.ok && hi.ok) {
      achieved = abs((lo.d2 - hi.d2) / hi.d2).to_double();
      if (achieved <= ctx.residual_target) {
        DistanceResult r;
        r.d = LogValue::from_real(sqrt(hi.d2));
        r.m = m;
        r.precision_used = hi_digits;
        r.residual = achieved;
        return r;
      }
    }
    digits *= ctx.escalation_factor;
  }
  fail(ErrorKind::precision_exhausted, "distance: escalation exhausted for m=" + std::to_string(m) +
                                           " (achieved relative residual " + format_sci(achieved) + ")");
}

BiorthogonalFamily minimal_family(const spectra::Spectrum& s, double T, const PrecisionContext& ctx) {
  ctx.validate();
  const std::size_t n = s.size();
  int digits = starting_digits(s, T, ctx);
  double achieved = 1.0;
  for (int attempt = 0; attempt <= ctx.max_escalations; ++attempt, digits *= ctx.escalation_factor) {
    const Bits bits = bits_for_digits(digits);
    const BigMatrix G = gram_matrix(s, T, bits);
    BigMatrix L = G;
    if (!cholesky(L)) continue;
    // Columns of G^{-1}: solve L L^T x = e_j.
    std::vector<std::vector<BigFloat>> inv(n, std::vector<BigFloat>(n, BigFloat(bits)));
    BigFloat tmp(bits);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<BigFloat> x(n, BigFloat(bits));
      x[j] = BigFloat(1.0, bits);
      forward_solve(L, x);
      for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
          mpfr_mul(tmp.get(), L(k, ii).get(), x[k].get(), MPFR_RNDN);
          mpfr_sub(x[ii].get(), x[ii].get(), tmp.get(), MPFR_RNDN);
        }
        mpfr_div(x[ii].get(), x[ii].get(), L(ii, ii).get(), MPFR_RNDN);
      }
      inv[j] = std::move(x);
    }
    // Residual |G G^{-1} - I|, entry (n, m) = <sigma_m, e^{-lambda_n t}> - delta.
    std::vector<std::vector<double>> residuals(n, std::vector<double>(n, 0.0));
    double worst = 0.0;
    BigFloat acc(bits);
    for (std::size_t mcol = 0; mcol < n; ++mcol) {
      for (std::size_t row = 0; row < n; ++row) {
        mpfr_set_si(acc.get(), row == mcol ? -1 : 0, MPFR_RNDN);
        for (std::size_t k = 0; k < n; ++k) {
          mpfr_mul(tmp.get(), G(row, k).get(), inv[mcol][k].get(), MPFR_RNDN);
          mpfr_add(acc.get(), acc.get(), tmp.get(), MPFR_RNDN);
        }
        residuals[mcol][row] = std::fabs(acc.to_double());
        worst = std::max(worst, residuals[mcol][row]);
      }
    }
    achieved = worst;
    if (worst > ctx.residual_target) continue;
    bool positive = true;
    for (std::size_t mcol = 0; mcol < n; ++mcol) positive &= inv[mcol][mcol].sign() > 0;
    if (!positive) continue;

    BiorthogonalFamily f;
    f.method = FamilyMethod::minimal;
    f.horizon = T;
    f.tolerance = ctx.residual_target;
    for (std::size_t mcol = 0; mcol < n; ++mcol) {
      f.indices.push_back(static_cast<int>(mcol) + 1);
      f.norms.push_back(LogValue::from_real(sqrt(inv[mcol][mcol])));
    }
    f.coefficients = std::move(inv);
    f.residuals = std::move(residuals);
    return f;
  }
  fail(ErrorKind::precision_exhausted,
       "minimal_family: escalation exhausted (achieved residual " + format_sci(achieved) + ")");
}

LogValue minimal_norm_growing(const spectra::Spectrum& s, double T, int m, const PrecisionContext& ctx) {
  const DistanceResult r = distance(s, T, m, ctx);
  const Bits bits = r.d.bits();
  const BigFloat lt = BigFloat(s.lambda(static_cast<std::size_t>(m)), bits) * BigFloat(T, bits);
  return LogValue(-lt - r.d.log_magnitude(), 1);
}

LogValue muntz_infinite_distance(const spectra::Spectrum& s, int m, Bits bits) {
  require(s.lambda(1) > 0.0, "the T -> infinity distance needs lambda_1 > 0", ErrorKind::invalid_argument);
  require(m >= 1 && static_cast<std::size_t>(m) <= s.size(), "index m out of range", ErrorKind::invalid_argument);
  const BigFloat lm(s.lambda(static_cast<std::size_t>(m)), bits);
  BigFloat acc = -log(lm * 2.0) / 2.0;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    if (static_cast<int>(k) == m) continue;
    const BigFloat lk(s.lambda(k), bits);
    acc += log(abs(lm - lk)) - log(lm + lk);
  }
  return LogValue(acc, 1);
}

TruncationStudy converge_in_truncation(const std::function<spectra::Spectrum(int)>& make,
                                       const std::vector<int>& lengths, double T, int m,
                                       const PrecisionContext& ctx, double rel_tol) {
  require(!lengths.empty(), "no truncation lengths given", ErrorKind::invalid_argument);
  TruncationStudy study;
  study.last_relative_change = std::numeric_limits<double>::infinity();
  bool have_previous = false;
  for (int N : lengths) {
    DistanceResult r = distance(make(N), T, m, ctx);
    study.history.emplace_back(N, r.d.log_double());
    if (have_previous) {
      // d decreases with N; compare in the log domain to avoid underflow.
      const BigFloat dl = r.d.log_magnitude() - study.result.d.log_magnitude();
      study.last_relative_change = std::fabs(std::expm1(dl.to_double()));
    }
    study.result = std::move(r);
    study.truncation = N;
    have_previous = true;
    if (study.last_relative_change < rel_tol) {
      study.converged = true;
      break;
    }
  }
  return study;
}

std::string distance_csv_header() { return "m,T,digits_used,log_d,residual\n"; }

std::string distance_csv_row(const DistanceResult& r, double T) {
  return std::to_string(r.m) + "," + format_sci(T) + "," + std::to_string(r.precision_used) + "," +
         format_sci(r.d.log_magnitude()) + "," + format_sci(r.residual) + "\n";
}

}  // namespace biortho::gram
