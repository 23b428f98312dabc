#pragma once

#include <vector>

#include "biortho/spectra/spectrum.hpp"

namespace biortho::spectra {

// Gap parameters of sqrt(lambda_n): global bounds, bounds for n >= N* (lower)
// and n >= N_* (upper), and the derived M*.
struct GapProfile {
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double gamma_min_star = 0.0;
  double gamma_max_star = 0.0;
  int n_star_upper = 1;
  int n_star_lower = 1;
  double m_star = 0.0;

  // Recompute m_star from the other fields.
  void refresh_m_star();
  void validate() const;
};

// sqrt(lambda_{n+1}) - sqrt(lambda_n), n = 1..N-1 (element n-1).
std::vector<double> sqrt_gaps(const Spectrum& s);

GapProfile analyze_gaps(const Spectrum& s, int n_star);

bool verify_gap_hypotheses(const Spectrum& s, const GapProfile& p);

}  // namespace biortho::spectra
