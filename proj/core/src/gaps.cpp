#include "biortho/spectra/gaps.hpp"

#include <algorithm>
#include <cmath>

#include "biortho/core/errors.hpp"

namespace biortho::spectra {

void GapProfile::refresh_m_star() {
  m_star = (1.0 - gamma_min / gamma_min_star) * (n_star_upper - 1);
}

void GapProfile::validate() const {
  require(gamma_min > 0.0 && gamma_min <= gamma_min_star, "gap profile needs 0 < gamma_min <= gamma_min*",
          ErrorKind::invalid_argument);
  require(gamma_max_star > 0.0 && gamma_max_star <= gamma_max, "gap profile needs 0 < gamma_max* <= gamma_max",
          ErrorKind::invalid_argument);
  require(n_star_upper >= 1 && n_star_lower >= 1, "gap thresholds must be >= 1", ErrorKind::invalid_argument);
}

std::vector<double> sqrt_gaps(const Spectrum& s) {
  std::vector<double> g;
  g.reserve(s.size() > 0 ? s.size() - 1 : 0);
  for (std::size_t n = 1; n < s.size(); ++n) g.push_back(std::sqrt(s.lambda(n + 1)) - std::sqrt(s.lambda(n)));
  return g;
}

GapProfile analyze_gaps(const Spectrum& s, int n_star) {
  require(s.size() >= 2, "gap analysis needs at least two eigenvalues", ErrorKind::invalid_argument);
  require(n_star >= 1 && static_cast<std::size_t>(n_star) <= s.size() - 1,
          "n_star must lie in 1..N-1", ErrorKind::invalid_argument);
  const std::vector<double> g = sqrt_gaps(s);
  GapProfile p;
  p.gamma_min = *std::min_element(g.begin(), g.end());
  p.gamma_max = *std::max_element(g.begin(), g.end());
  p.gamma_min_star = *std::min_element(g.begin() + (n_star - 1), g.end());
  p.gamma_max_star = *std::max_element(g.begin() + (n_star - 1), g.end());
  p.n_star_upper = n_star;
  p.n_star_lower = n_star;
  p.refresh_m_star();
  return p;
}

bool verify_gap_hypotheses(const Spectrum& s, const GapProfile& p) {
  if (!(p.gamma_min > 0.0 && p.gamma_min_star > 0.0 && p.gamma_max_star > 0.0)) return false;
  const std::vector<double> g = sqrt_gaps(s);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (g[i] < p.gamma_min || g[i] > p.gamma_max) return false;
    if (n >= p.n_star_upper && g[i] < p.gamma_min_star) return false;
    if (n >= p.n_star_lower && g[i] > p.gamma_max_star) return false;
  }
  return true;
}

}  // namespace biortho::spectra
