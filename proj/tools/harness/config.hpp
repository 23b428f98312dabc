#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "biortho/core/precision.hpp"
#include "biortho/sai/sai.hpp"
#include "biortho/spectra/spectrum.hpp"

namespace biortho::cli {

// Where the eigenvalues come from. Generated spectra are built at two lengths:
// `truncation` for the Gram oracle and the lower bounds, `sai_truncation` for the
// Weierstrass product. A file spectrum is used whole for the construction.
struct SpectrumSource {
  std::string kind = "quadratic";  // quadratic | bessel | file
  double r = 1.0, b = 0.0, c = 0.0;
  double alpha = 0.0, scale = 1.0;
  std::string path;
  int truncation = 40;
  int sai_truncation = 400;
  double stretch = 1.0;  // lambda -> stretch^2 lambda, used by scale sweeps

  spectra::Spectrum build(int N) const;
  spectra::Spectrum gram_spectrum() const;
  spectra::Spectrum sai_spectrum() const;
};

struct RunConfig {
  SpectrumSource spectrum;
  std::vector<double> T;
  std::vector<int> m;
  std::vector<int> n_star{1};
  PrecisionContext precision{100, 1e-30, 3, 2};
  double tolerance = 1e-8;      // log slack of lower bound <= 1/d
  double sai_tolerance = 1e-6;  // log slack of minimal norm <= sai norm, residual tolerance
  std::filesystem::path output_dir = ".";
  std::string calibration_path;
  bool plot = false;
  bool check_lower = true;
  bool check_sai = true;
  bool check_bstar = true;
  int threads = 0;  // 0: hardware concurrency
  // Added to every log lower bound; lets tests exercise the failure path.
  double lower_bound_log_inflation = 0.0;
  // counting-check
  double rho_min = 0.5, rho_max = 200.0;
  int rho_points = 50;

  void validate() const;
};

// lambda_n = n^2, T in {0.1, 1}, m = 1..5.
RunConfig default_run_config();

RunConfig parse_config(const std::string& text);
RunConfig read_config_file(const std::filesystem::path& path);

// "1,2,5-8" style integer lists and "0.1, 1" style real lists.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

// Calibration file lookup: explicit path, then $BIORTHO_CALIBRATION, then the
// config entry, then the file shipped with the tools.
std::filesystem::path resolve_calibration(const std::string& flag_path, const RunConfig& config);
sai::CalibrationConstants load_calibration(const std::string& flag_path, const RunConfig& config);

}  // namespace biortho::cli
