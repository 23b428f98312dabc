// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "biortho/core/errors.hpp"
#include "biortho/counting/counting.hpp"
#include "biortho/gram/gram.hpp"
#include "biortho/guichal/guichal.hpp"
#include "biortho/sai/sai.hpp"
#include "biortho/spectra/gaps.hpp"
#include "harness/config.hpp"
#include "harness/report.hpp"
#include "random_spectra.hpp"

using namespace biortho;
using spectra::Spectrum;

namespace {

// Independent 60-digit evaluation of d^2 = G11 - G12^2 / G22 for lambda = (1, 2), T = 1.
constexpr const char* kD2Lambda12T1 = "0.02355438850376703754426761986379022829095856024901132623";
// max_x (1 - e^{-x})(1 + x) / x, from a 40-digit mpmath maximisation.
constexpr double kC1 = 1.298425607525639119;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PrecisionContext context(int digits, double target) {
  PrecisionContext c;
  c.working_digits = digits;
  c.residual_target = target;
  return c;
}

Outcome counting_soundness() {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0, profiles_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int ns = 1 + static_cast<int>(u(rng) * 10);
    const Spectrum s = test_support::random_two_gap_spectrum(rng, 40, ns, 0.2 + 0.3 * u(rng), 0.8 + u(rng),
                                                             0.6 + 0.3 * u(rng), 1.0 + 1.5 * u(rng));
    const spectra::GapProfile p = spectra::analyze_gaps(s, ns);
    profiles_ok += spectra::verify_gap_hypotheses(s, p) ? 1 : 0;
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(0.01 * std::pow(s.values().back() / 0.01, i / 49.0));
    violations += counting::check_counting_lemmas(s, p, grid).size();
  }
  return {violations == 0 && profiles_ok == 100,
          std::to_string(violations) + " violations over 100 spectra x 50 radii, " + std::to_string(profiles_ok) +
              "/100 profiles verified"};
}

Outcome guichal_exactness() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> num(1, 40), den(1, 9);
  std::size_t nonzero = 0, sets = 0;
  for (int M = 0; M <= 12; ++M) {
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<mpq_class> l;
      mpq_class cur(num(rng) - 1, den(rng));
      for (int i = 0; i <= M; ++i) {
        cur.canonicalize();
        l.push_back(cur);
        cur += mpq_class(num(rng), den(rng));
      }
      for (const mpq_class& d : guichal::jet_defects_exact(guichal::guichal_coefficients(l))) nonzero += d != 0;
      ++sets;
    }
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int pairs = 0, envelope_fail = 0;
  const double s_values[] = {1e-4, 1e-3, 0.01, 0.1, 0.3, 1.0, 2.0, 5.0, 12.0, 30.0};
  for (int trial = 0; trial < 100; ++trial) {
    const int M = 1 + trial % 12;
    std::vector<double> l;
    double cur = 3.0 * u(rng);
    for (int i = 0; i <= M; ++i) {
      l.push_back(cur);
      cur += 0.05 + 4.0 * u(rng);
    }
    const guichal::GuichalSum g = guichal::guichal_coefficients(l);
    for (double s : s_values) {
      const BigFloat q = guichal::q_eval(g, s);
      if (!(q.sign() > 0 && q <= guichal::q_envelope(g, s))) ++envelope_fail;
      ++pairs;
    }
  }
  return {nonzero == 0 && envelope_fail == 0 && pairs == 1000,
          std::to_string(nonzero) + " nonzero jet defects over " + std::to_string(sets) + " rational sets (M <= 12), " +
              std::to_string(envelope_fail) + "/" + std::to_string(pairs) + " envelope failures"};
}

Outcome tail_sandwich() {
  const double c1 = guichal::tail_constant_c1();
  const double c1_err = std::fabs(c1 - kC1) / kC1;
  int fails = 0;
  for (int N = 1; N <= 50; ++N) {
    for (int k = 0; k < 60; ++k) {
      const double x = std::pow(10.0, -3.0 + 6.0 * k / 59.0);
      const guichal::ExpTail t = guichal::exp_tail(N, x);
      // Equality holds at N = 1 and the maximiser of C1; rounding slack only.
      if (t.lower.log_double() > t.value.log_double() + 1e-12 || t.value.log_double() > t.upper.log_double() + 1e-12)
        ++fails;
    }
  }
  return {fails == 0 && c1_err < 5e-13, std::to_string(fails) + "/3000 sandwich failures, C1 = " +
                                             fmt("%.15f", c1) + " (relative error " + fmt("%.1e", c1_err) + ")"};
}

Outcome oracle_agreement() {
  const gram::DistanceResult r = gram::distance(Spectrum({1, 2}), 1.0, 1, context(50, 1e-35));
  const Bits b = 256;
  const BigFloat d2 = r.d.to_real(b) * r.d.to_real(b);
  const BigFloat expect = BigFloat::from_string(kD2Lambda12T1, b);
  const double rel = abs((d2 - expect) / expect).to_double();

  std::mt19937_64 rng(9);
  double worst = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const Spectrum s = test_support::random_two_gap_spectrum(rng, 8, 1, 0.7, 1.3, 0.7, 1.3);
    if (s.lambda(1) < 0.05) continue;
    const double T = 25.0 / s.lambda(1);
    for (int m = 1; m <= 8; ++m) {
      const double d = gram::distance(s, T, m, context(40, 1e-25)).d.to_double();
      const double dinf = gram::muntz_infinite_distance(s, m).to_double();
      worst = std::max(worst, std::fabs(d - dinf) / dinf);
      ++cases;
    }
  }
  return {rel <= 1e-30 && worst <= 1e-6 && cases > 0,
          "d^2 relative error " + fmt("%.1e", rel) + ", Muntz limit worst relative gap " + fmt("%.1e", worst) +
              " over " + std::to_string(cases) + " cases at lambda_1 T = 25"};
}

Outcome lower_bound_soundness() {
  const int N = 48;
  const PrecisionContext ctx = context(100, 1e-30);
  const double slack = 1e-8;
  int checks = 0, fails = 0, max_digits = 0;
  double worst_margin = INFINITY;
  for (double shift : {0.0, 0.3}) {
    const Spectrum s = spectra::gen_quadratic(1, 2 * shift, shift * shift, N);
    for (double T : {0.05, 0.25, 1.0}) {
      for (int m = 1; m <= 15; ++m) {
        const gram::DistanceResult d = gram::distance(s, T, m, ctx);
        max_digits = std::max(max_digits, d.precision_used);
        const double inv = -d.d.log_double();
        std::vector<double> bounds;
        bounds.push_back(guichal::lower_bound_one_gap(T, spectra::analyze_gaps(s, 1).gamma_max, s.lambda(1), m)
                             .bound_on_inverse_distance.log_double());
        for (int ns : {1, 3, 6})
          bounds.push_back(guichal::lower_bound_two_gap(s, spectra::analyze_gaps(s, ns), T, m)
                               .bound_on_inverse_distance.log_double());
        bounds.push_back(guichal::best_lower_bound(s, T, m, m, N - 1).bound_on_inverse_distance.log_double());
        for (double lb : bounds) {
          ++checks;
          worst_margin = std::min(worst_margin, inv - lb);
          if (lb > inv + slack) ++fails;
        }
      }
    }
  }
  return {fails == 0 && max_digits <= 300,
          std::to_string(fails) + "/" + std::to_string(checks) + " bounds above 1/d (N = " + std::to_string(N) +
              "), smallest log margin " + fmt("%.4g", worst_margin) + ", max digits " + std::to_string(max_digits)};
}

Outcome exponential_factor_law() {
  // ln(1/d_N) grows with N at every T and the slope keeps rising with N, so a
  // long truncation is used.
  const int N = 160;
  const Spectrum s = spectra::gen_quadratic(1, 0, 0, N);
  const double T[] = {0.1, 0.05, 0.025};
  double x[3], y[3];
  for (int i = 0; i < 3; ++i) {
    x[i] = 1.0 / T[i];
    y[i] = -gram::distance(s, T[i], 1, context(60, 1e-30)).d.log_double();
  }
  const double mx = (x[0] + x[1] + x[2]) / 3, my = (y[0] + y[1] + y[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  const double slope = sxy / sxx;
  const double gmax_star = spectra::analyze_gaps(s, 1).gamma_max_star;
  const double threshold = 2.0 / (gmax_star * gmax_star) * (1.0 - 0.15);
  return {slope >= threshold, "least-squares slope " + fmt("%.4f", slope) + " >= " + fmt("%.4f", threshold) +
                                  " (N = " + std::to_string(N) + ")"};
}

const sai::CalibrationConstants& calibration() {
  static const sai::CalibrationConstants cal = sai::calibrate_constants(sai::CalibrationGrid{}, PrecisionContext{});
  return cal;
}

Outcome sai_validity() {
  const Spectrum s = spectra::gen_quadratic(1, 0, 0, 8);
  const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
  const double T = 1.0;
  const sai::MollifierParams params = sai::choose_params(T, p.gamma_min_star, calibration());
  const std::vector<int> idx{1, 2, 3, 4, 5, 6, 7, 8};
  sai::FamilyDiagnostics diag;
  const BiorthogonalFamily fam = sai::sai_family(s, p, idx, T, params, PrecisionContext{}, 1e-6, &diag);
  const double resid = fam.max_residual();
  double parseval = 0.0, margin = INFINITY;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    parseval = std::max(parseval, diag.parseval_relative_gap[i]);
    const double log_min = gram::minimal_norm_growing(s, T, idx[i], context(60, 1e-30)).log_double();
    margin = std::min(margin, fam.norms[i].log_double() - log_min);
  }
  return {resid <= 1e-6 && parseval <= 1e-6 && margin >= -1e-6,
          "max residual " + fmt("%.2e", resid) + ", Parseval gap " + fmt("%.2e", parseval) +
              ", smallest log margin over minimal norm " + fmt("%.4g", margin)};
}

Outcome shape_dominance() {
  const sai::CalibrationConstants& cal = calibration();
  double drift = 0.0;
  for (const auto& [k, v] : cal.provenance)
    if (k.rfind("drift.", 0) == 0) drift = std::max(drift, std::stod(v));
  const Spectrum s = spectra::gen_quadratic(1, 0, 0, 400);
  const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
  int fails = 0;
  double worst = INFINITY;
  for (double T : {0.1, 1.0}) {
    const sai::MollifierParams params = sai::choose_params(T, p.gamma_min_star, cal);
    for (int m = 1; m <= 8; ++m) {
      const double norm2 = 2.0 * sai::sai_norm(s, p, m, T, params).log_double();
      const double bound = sai::theoretical_B_star(p, s.lambda(m), s.lambda(p.n_star_upper), T, cal).log_double();
      worst = std::min(worst, bound - norm2);
      if (bound < norm2) ++fails;
    }
  }
  return {fails == 0 && drift < 0.05, std::to_string(fails) + "/16 cells with B* below the squared norm, smallest log margin " +
                                          fmt("%.4g", worst) + ", largest refinement drift " + fmt("%.2e", drift)};
}

Outcome reproducibility() {
  const cli::RunConfig cfg = cli::read_config_file(BIORTHO_EXAMPLE_CONFIG);
  const sai::CalibrationConstants cal = cli::load_calibration("", cfg);
  const std::string a = cli::report_csv(cli::run_verify(cfg, &cal));
  const std::string b = cli::report_csv(cli::run_verify(cfg, &cal));
  const auto lines = std::count(a.begin(), a.end(), '\n');
  return {a == b && lines > 1, std::string(a == b ? "identical" : "different") + " CSV over " +
                                   std::to_string(lines - 1) + " rows"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counting soundness", 10.0, counting_soundness},
      {2, "Guichal exactness", 30.0, guichal_exactness},
      {3, "tail sandwich", 5.0, tail_sandwich},
      {4, "oracle agreement", 5.0, oracle_agreement},
      {5, "lower-bound soundness", 600.0, lower_bound_soundness},
      {6, "exponential-factor law", 300.0, exponential_factor_law},
      {7, "explicit family validity", 600.0, sai_validity},
      {8, "upper-bound shape dominance", 1e9, shape_dominance},
      {9, "reproducibility", 1e9, reproducibility},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const bool in_time = secs < c.time_limit;
    const bool ok = o.pass && in_time;
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; %.2f s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : " (over the time limit)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
