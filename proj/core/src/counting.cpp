#include "biortho/counting/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "biortho/core/errors.hpp"

namespace biortho::counting {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::global: return "global";
    case Branch::eq_case: return "eq_case";
    case Branch::above_case: return "above_case";
    case Branch::below_case_a: return "below_case_a";
    case Branch::below_case_b: return "below_case_b";
    case Branch::new_eq: return "new_eq";
    case Branch::new_above: return "new_above";
    case Branch::new_below: return "new_below";
    case Branch::new_below2: return "new_below2";
  }
  return "unknown";
}

bool window_in_truncation(const spectra::Spectrum& s, int n, double rho) {
  return s.lambda(static_cast<std::size_t>(n)) + rho <= s.values().back();
}

int count_exact(const spectra::Spectrum& s, int n, double rho) {
  require(n >= 1 && static_cast<std::size_t>(n) <= s.size(), "index out of range", ErrorKind::invalid_argument);
  require(rho > 0.0, "rho must be positive", ErrorKind::invalid_argument);
  require(window_in_truncation(s, n, rho), "counting window exceeds the truncation", ErrorKind::truncation);
  const double ln = s.lambda(static_cast<std::size_t>(n));
  int count = 0;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    if (static_cast<int>(k) == n) continue;
    if (std::fabs(ln - s.lambda(k)) <= rho) ++count;
  }
  return count;
}

std::vector<CountingBound> applicable_bounds(const spectra::Spectrum& s, const spectra::GapProfile& p, int n,
                                             double rho) {
  require(n >= 1 && static_cast<std::size_t>(n) <= s.size(), "index out of range", ErrorKind::invalid_argument);
  require(rho > 0.0, "rho must be positive", ErrorKind::invalid_argument);
  const double sr = std::sqrt(rho);
  const double g = p.gamma_min;
  const double gs = p.gamma_min_star;
  const double ms = p.m_star;
  const int ns = p.n_star_upper;

  std::vector<CountingBound> out;
  auto add = [&](Branch b, double v) { out.push_back({b, v}); };
  add(Branch::global, 2.0 * sr / g);

  // Branches below need lambda_{N*} from the truncation.
  if (ns < 1 || static_cast<std::size_t>(ns) > s.size()) return out;
  const double ln = s.lambda(static_cast<std::size_t>(n));
  const double lns = s.lambda(static_cast<std::size_t>(ns));

  if (n == ns) {
    if (rho <= lns) {
      add(Branch::eq_case, sr / g + sr / gs);
      add(Branch::new_eq, sr / g + sr / gs);
    }
    if (rho >= lns) {
      add(Branch::eq_case, ns - 1 + sr / gs);
      add(Branch::new_eq, ms + 2.0 * sr / gs);
    }
  } else if (n > ns) {
    if (rho <= ln - lns) {
      add(Branch::above_case, 2.0 * sr / gs);
      add(Branch::new_above, 2.0 * sr / gs);
    }
    if (rho >= ln - lns && rho <= ln) {
      add(Branch::above_case, sr / g + sr / gs);
      add(Branch::new_above, sr / g + sr / gs);
    }
    if (rho >= ln) {
      add(Branch::above_case, n - 1 + sr / gs);
      add(Branch::new_above, ms + 2.0 * sr / gs);
    }
  } else {
    const double gap_up = lns - ln;
    if (ln <= gap_up) {
      if (rho <= ln) add(Branch::below_case_a, 2.0 * sr / g);
      if (rho >= ln && rho <= gap_up) add(Branch::below_case_a, n - 1 + sr / g);
      if (rho >= gap_up) add(Branch::below_case_a, ns - 1 + sr / gs);
    }
    if (ln >= gap_up) {
      if (rho <= gap_up) add(Branch::below_case_b, 2.0 * sr / g);
      if (rho >= gap_up && rho <= ln) add(Branch::below_case_b, ns - n + sr / g + sr / gs);
      if (rho >= ln) add(Branch::below_case_b, ns - 1 + sr / gs);
    }
    const double split = std::max(ln, gap_up);
    if (rho <= split) add(Branch::new_below, 2.0 * sr / g);
    if (rho >= split) add(Branch::new_below, ms + (1.0 + std::sqrt(2.0)) * sr / gs);
    if (rho <= lns) add(Branch::new_below2, 2.0 * sr / g);
    if (rho >= lns) add(Branch::new_below2, ms + 2.0 * sr / gs);
  }
  return out;
}

CountingBound count_bound(const spectra::Spectrum& s, const spectra::GapProfile& p, int n, double rho) {
  require(window_in_truncation(s, n, rho), "counting window exceeds the truncation", ErrorKind::truncation);
  const auto all = applicable_bounds(s, p, n, rho);
  return *std::min_element(all.begin(), all.end(),
                           [](const CountingBound& a, const CountingBound& b) { return a.value < b.value; });
}

std::vector<Violation> check_counting_lemmas(const spectra::Spectrum& s, const spectra::GapProfile& p,
                                             const std::vector<double>& rho_grid) {
  std::vector<Violation> out;
  for (int n = 1; n <= static_cast<int>(s.size()); ++n) {
    for (double rho : rho_grid) {
      if (!(rho > 0.0) || !window_in_truncation(s, n, rho)) continue;
      const int exact = count_exact(s, n, rho);
      for (const CountingBound& b : applicable_bounds(s, p, n, rho)) {
        if (exact > b.value * (1.0 + kCountingSlack) + kCountingSlack) {
          out.push_back({n, rho, exact, b.branch, b.value});
        }
      }
    }
  }
  return out;
}

std::string violations_csv(const std::vector<Violation>& violations) {
  std::string out = "n,rho,exact,branch,bound\n";
  char buf[128];
  for (const Violation& v : violations) {
    std::snprintf(buf, sizeof buf, "%d,%.16e,%d,%s,%.16e\n", v.n, v.rho, v.exact, to_string(v.branch).c_str(),
                  v.bound);
    out += buf;
  }
  return out;
}

}  // namespace biortho::counting
