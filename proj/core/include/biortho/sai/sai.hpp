#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "biortho/core/family.hpp"
#include "biortho/core/log_value.hpp"
#include "biortho/core/precision.hpp"
#include "biortho/spectra/gaps.hpp"
#include "biortho/spectra/spectrum.hpp"

namespace biortho::sai {

struct MollifierParams {
  double T_prime = 0.0;
  int N_prime = 0;
  double C_const = 0.0;   // T' / (2 sum_{k >= N'} k^{-2})
  double theta3 = 0.0;
  int truncation_K = 0;   // Weierstrass factors used; 0 means the whole supplied truncation

  void validate() const;
};

struct CalibrationConstants {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double C_u_growth = 0.0;
  double theorem_C = 0.0;  // exponent constant of the norm bound, fitted by dominance
  std::vector<std::pair<std::string, std::string>> provenance;

  void validate() const;
};

// T' = min(T, 1/gamma_min*^2); N' = ceil(2 + theta3 / (gamma_min*^2 T')).
MollifierParams choose_params(double T, double gamma_min_star, const CalibrationConstants& cal);

// prod_{k >= N'} cos(a_k z), a_k = C / k^2, in double precision. Factors with
// a_k |z| > 1 are multiplied out; the rest is summed through the power series of
// ln cos with exact zeta tails, cached on a geometric ladder of cut indices.
class CosineProduct {
 public:
  CosineProduct(double C, int N_prime);

  double C() const { return C_; }
  int N_prime() const { return n_prime_; }

  // ln|prod cos(a_k x)| for real x; sign receives the sign of the product (0 at a zero).
  double log_abs_real(double x, int& sign) const;
  // ln P(iy) = sum_k (ln cosh(a_k y) - a_k y), y >= 0.
  double log_P_imag(double y) const;
  // ln|P(z)| with P(z) = e^{i z T'/2} prod cos(a_k z).
  double log_abs_P(std::complex<double> z) const;
  // arg P(z), reduced to (-pi, pi].
  double arg_P(std::complex<double> z) const;
  // Upper bound of ln|prod cos(a_k x)| over a <= x <= b (0 <= a <= b).
  double log_abs_real_bound(double a, double b) const;

 private:
  struct Level {
    long K = 0;
    std::vector<double> z;  // z[i] = (K+1)^{4(i+1)} zeta_tail(4(i+1), K)
    double zeta2 = 0.0;     // zeta_tail(2, K)
  };
  const Level& level_for(double w) const;

  double C_;
  int n_prime_;
  double half_T_prime_;
  std::vector<double> c_;
  mutable std::map<long, Level> levels_;
};

struct WeierstrassValue {
  LogValue value;            // |F_m(z)| over the truncation; sign 0 at a zero
  double phase = 0.0;        // arg F_m(z)
  double log_tail_bound = 0.0;  // bound on |ln|F| - ln|F_K|| for the omitted factors
};

// F_m(z) = prod_{k != m} (1 - ((iz - lambda_m)/(lambda_k - lambda_m))^2) over the
// spectrum truncation, with the omitted tail bounded through gamma_min* (k >= N*).
WeierstrassValue log_weierstrass(const spectra::Spectrum& s, const spectra::GapProfile& p, int m,
                                 std::complex<double> z, int truncation_K = 0);

struct MollifierValue {
  LogValue modulus;  // |P(z)|
  double phase = 0.0;
};

MollifierValue log_mollifier(const MollifierParams& params, std::complex<double> z);

struct NormReport {
  LogValue norm;            // ||sigma_m^+||_{L^2(0,T)}
  double x_cut = 0.0;       // last quadrature node
  int nodes = 0;
  double log_tail_ratio = 0.0;  // certified tail / accumulated integral, log
  double log_P_im = 0.0;    // ln P(i lambda_m)
  double log_peak = 0.0;    // max ln|f(x)|
};

// ||sigma_m^+||^2 = e^{-2 lambda_m T} / (2 pi) int_R |f_m(x)|^2 dx by the trapezoid rule
// on the band-limit grid, stopped once the integrand envelope certifies the tail.
NormReport sai_norm_report(const spectra::Spectrum& s, const spectra::GapProfile& p, int m, double T,
                           const MollifierParams& params, double tail_tolerance = 1e-10);
LogValue sai_norm(const spectra::Spectrum& s, const spectra::GapProfile& p, int m, double T,
                  const MollifierParams& params);

struct FamilyDiagnostics {
  std::vector<double> parseval_relative_gap;  // per index: |time-domain / Parseval norm^2 - 1|
  std::vector<double> support_leak;           // per index: max |phi(+-0.55 T)| / max |phi|
  std::vector<int> bits_used;
  std::vector<int> nodes;
};

// Samples sigma_m^+ at Gauss-Legendre times and checks biorthogonality against
// e^{lambda_n t} for n in `indices` at extended precision.
BiorthogonalFamily sai_family(const spectra::Spectrum& s, const spectra::GapProfile& p,
                              const std::vector<int>& indices, double T, const MollifierParams& params,
                              const PrecisionContext& ctx, double tolerance = 1e-6,
                              FamilyDiagnostics* diagnostics = nullptr);

// Right-hand side of the norm^2 bound: e^{-2 lambda_m T} e^{C/(T gamma_min*^2)}
// e^{C sqrt(lambda_m)/gamma_min*} B*(T, gamma_min, gamma_min*, N*, m).
LogValue theoretical_B_star(const spectra::GapProfile& p, double lambda_m, double lambda_Nstar, double T,
                            const CalibrationConstants& cal);

struct CalibrationGrid {
  std::vector<int> n_primes{2, 3, 4, 6, 8, 12, 16, 24, 32};
  double y_max_factor = 400.0;   // y up to factor * N'^2
  double y_steps_per_unit = 4.0; // y spacing N'^2 / steps
  std::vector<double> theta0_candidates;  // empty: log-spaced default
  double theta2_y_max = 1e8;
  int theta2_points = 400;
  std::vector<std::string> growth_spectra{"quadratic:1,0", "quadratic:1,0.3", "bessel:1"};
  int growth_truncation = 6000;
  std::vector<int> growth_m{1, 2, 4, 8, 16};
  double growth_x_max = 1e6;
  int growth_points = 240;
  // Norm points fitting theorem_C.
  std::vector<std::string> norm_spectra{"quadratic:1,0", "quadratic:1,0.3"};
  int norm_truncation = 400;
  std::vector<double> norm_T{0.05, 0.075, 0.1, 0.15, 0.25, 0.5, 1.0, 1.5};
  std::vector<int> norm_m{1, 2, 4, 6};

  CalibrationGrid refined() const;
};

// Constants of the mollifier and growth lemmas measured on `grid`, checked for
// stability against grid.refined() (drift above max_drift is an error).
CalibrationConstants calibrate_constants(const CalibrationGrid& grid, const PrecisionContext& ctx,
                                         double max_drift = 0.05);
// Single pass without the refinement check.
CalibrationConstants calibrate_once(const CalibrationGrid& grid);

std::string format_calibration(const CalibrationConstants& cal);
CalibrationConstants parse_calibration(const std::string& text);
CalibrationConstants read_calibration_file(const std::string& path);
void write_calibration_file(const CalibrationConstants& cal, const std::string& path);

}  // namespace biortho::sai
