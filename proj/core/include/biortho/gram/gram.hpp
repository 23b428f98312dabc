#pragma once

#include <functional>
#include <string>
#include <vector>

#include "biortho/core/bigfloat.hpp"
#include "biortho/core/family.hpp"
#include "biortho/core/log_value.hpp"
#include "biortho/core/precision.hpp"
#include "biortho/spectra/spectrum.hpp"

namespace biortho::gram {

// Dense square matrix of BigFloat, row-major.
class BigMatrix {
 public:
  BigMatrix(std::size_t n, Bits bits);
  std::size_t size() const { return n_; }
  BigFloat& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const BigFloat& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<BigFloat> a_;
};

// G[i][j] = (1 - exp(-(l_i + l_j) T)) / (l_i + l_j), or T when l_i + l_j = 0.
BigMatrix gram_matrix(const spectra::Spectrum& s, double T, Bits bits);

struct DistanceResult {
  LogValue d;
  int m = 0;
  int precision_used = 0;  // decimal digits of the accepted solve
  double residual = 0.0;   // relative change of d^2 between the two precisions compared
};

// Starting precision for an N-term solve (digits); raised further by escalation.
int starting_digits(const spectra::Spectrum& s, double T, const PrecisionContext& ctx);

// d_{T,m}: distance from exp(-lambda_m t) to the span of the other exponentials in L^2(0,T).
DistanceResult distance(const spectra::Spectrum& s, double T, int m, const PrecisionContext& ctx);

// Minimal-norm family biorthogonal to exp(-lambda_n t), from the inverse Gram matrix.
BiorthogonalFamily minimal_family(const spectra::Spectrum& s, double T, const PrecisionContext& ctx);

// exp(-lambda_m T) / d_{T,m}: the least norm of a family biorthogonal to exp(+lambda_n t).
LogValue minimal_norm_growing(const spectra::Spectrum& s, double T, int m, const PrecisionContext& ctx);

// Limit of d_{T,m} as T -> infinity (Cauchy/Muntz closed form); needs lambda_1 > 0.
LogValue muntz_infinite_distance(const spectra::Spectrum& s, int m, Bits bits = 256);

struct TruncationStudy {
  DistanceResult result;
  int truncation = 0;
  bool converged = false;
  double last_relative_change = 0.0;
  std::vector<std::pair<int, double>> history;  // (N, log d)
};

// Recompute d_{T,m} on the truncations produced by `make` for the given lengths
// until the relative change drops below rel_tol; flags non-convergence otherwise.
TruncationStudy converge_in_truncation(const std::function<spectra::Spectrum(int)>& make,
                                       const std::vector<int>& lengths, double T, int m,
                                       const PrecisionContext& ctx, double rel_tol = 1e-8);

std::string distance_csv_header();
std::string distance_csv_row(const DistanceResult& r, double T);

}  // namespace biortho::gram
