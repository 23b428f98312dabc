#pragma once

#include <vector>

#include "biortho/core/bigfloat.hpp"

namespace biortho {

// sum_{k > K} k^{-s} for s >= 2, K >= 0 (Euler-Maclaurin after a direct head).
BigFloat zeta_tail(unsigned long s, long K, Bits bits);

// c_1..c_J with ln cos(w) = -sum_j c_j w^{2j} for |w| < pi/2.
std::vector<BigFloat> log_cos_coefficients(int J, Bits bits);

// n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

}  // namespace biortho
