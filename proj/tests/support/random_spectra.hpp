#pragma once

#include <random>
#include <vector>

#include "biortho/spectra/spectrum.hpp"

namespace biortho::test_support {

// Random spectrum whose sqrt-gaps are drawn from [lo, hi] before index
// n_star and from [lo_star, hi_star] from n_star on.
inline spectra::Spectrum random_two_gap_spectrum(std::mt19937_64& rng, int N, int n_star, double lo, double hi,
                                                 double lo_star, double hi_star) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v;
  double r = 2.0 * u(rng);
  v.push_back(r * r);
  for (int n = 1; n < N; ++n) {
    const double g = n < n_star ? lo + (hi - lo) * u(rng) : lo_star + (hi_star - lo_star) * u(rng);
    r += g;
    v.push_back(r * r);
  }
  return spectra::Spectrum(std::move(v), spectra::GeneratorDescriptor{"random", {}});
}

}  // namespace biortho::test_support
