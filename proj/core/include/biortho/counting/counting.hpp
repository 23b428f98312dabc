#pragma once

#include <string>
#include <vector>

#include "biortho/spectra/gaps.hpp"
#include "biortho/spectra/spectrum.hpp"

namespace biortho::counting {

enum class Branch {
  global,
  eq_case,
  above_case,
  below_case_a,
  below_case_b,
  new_eq,
  new_above,
  new_below,
  new_below2,
};

std::string to_string(Branch b);

struct CountingBound {
  Branch branch = Branch::global;
  double value = 0.0;
};

// True when every lambda_k with |lambda_n - lambda_k| <= rho is inside the truncation.
bool window_in_truncation(const spectra::Spectrum& s, int n, double rho);

// card{k != n : |lambda_n - lambda_k| <= rho}.
int count_exact(const spectra::Spectrum& s, int n, double rho);

// Every branch of both counting lemmas whose rho-interval contains rho.
std::vector<CountingBound> applicable_bounds(const spectra::Spectrum& s, const spectra::GapProfile& p, int n,
                                             double rho);

// Minimum over applicable_bounds.
CountingBound count_bound(const spectra::Spectrum& s, const spectra::GapProfile& p, int n, double rho);

struct Violation {
  int n = 0;
  double rho = 0.0;
  int exact = 0;
  Branch branch = Branch::global;
  double bound = 0.0;
};

// Relative slack used when comparing an integer count with a floating bound.
inline constexpr double kCountingSlack = 1e-12;

// All (n, rho, branch) with count_exact above the branch value. Pairs whose
// window leaves the truncation are skipped.
std::vector<Violation> check_counting_lemmas(const spectra::Spectrum& s, const spectra::GapProfile& p,
                                             const std::vector<double>& rho_grid);

std::string violations_csv(const std::vector<Violation>& violations);

}  // namespace biortho::counting
