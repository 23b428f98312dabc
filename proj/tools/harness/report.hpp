#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "biortho/sai/sai.hpp"

namespace biortho::cli {

// One (T, n_star, m) cell of the chain
//   lower bound <= 1/d,   e^{-lambda_m T}/d <= sai norm <= sqrt(B*).
// Log values are natural logs; optional entries are absent when their check is off.
struct BoundRow {
  double T = 0.0;
  int n_star = 1;
  int m = 1;
  std::string regime;
  std::optional<double> log_lower;
  double log_inverse_distance = 0.0;
  double log_minimal_growing = 0.0;
  std::optional<double> log_sai;
  std::optional<double> log_bstar;  // half the log of the norm^2 bound
  int digits_used = 0;
  bool lower_ok = true;
  bool sai_ok = true;
  bool bstar_ok = true;
  bool pass() const { return lower_ok && sai_ok && bstar_ok; }
};

struct BoundReport {
  std::vector<BoundRow> rows;
  bool all_pass() const;
};

BoundRow compute_cell(const RunConfig& config, const sai::CalibrationConstants* cal, double T, int n_star, int m);

// Cells in the order T, n_star, m; computed in parallel, reported in that order.
// A module error is rethrown with the failing cell named.
BoundReport run_verify(const RunConfig& config, const sai::CalibrationConstants* cal);

std::string report_csv_header();
std::string report_csv_row(const BoundRow& row);
std::string report_csv(const BoundReport& report);

enum class SweepAxis { T, scale, truncation, m };
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepPoint {
  double value = 0.0;
  BoundRow row;
};

// Each sweep value replaces one axis of the config; the remaining lists stay.
std::vector<SweepPoint> run_sweep(const RunConfig& config, const sai::CalibrationConstants* cal, SweepAxis axis,
                                  const std::vector<double>& values);
std::string sweep_csv(SweepAxis axis, const std::vector<SweepPoint>& points);

}  // namespace biortho::cli
