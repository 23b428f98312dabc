#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biortho/core/errors.hpp"
#include "biortho/core/format.hpp"
#include "biortho/counting/counting.hpp"
#include "biortho/gram/gram.hpp"
#include "biortho/sai/sai.hpp"
#include "biortho/spectra/gaps.hpp"
#include "harness/config.hpp"
#include "harness/plot.hpp"
#include "harness/report.hpp"

namespace fs = std::filesystem;
using namespace biortho;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  int digits = 0;
  double tolerance = -1.0;
  bool plot = false;
  std::string calibration;
};

cli::RunConfig load(const Options& o) {
  cli::RunConfig cfg = o.config_path.empty() ? cli::default_run_config() : cli::read_config_file(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.digits > 0) cfg.precision.working_digits = o.digits;
  if (o.tolerance >= 0.0) cfg.tolerance = o.tolerance;
  if (o.plot) cfg.plot = true;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path.string(), ErrorKind::io);
  out << text;
  require(static_cast<bool>(out), "failed writing " + path.string(), ErrorKind::io);
  std::cout << "wrote " << path.string() << "\n";
}

int report_rows(const std::vector<const cli::BoundRow*>& rows) {
  int failed = 0;
  for (const cli::BoundRow* r : rows) {
    if (r->pass()) continue;
    ++failed;
    std::cout << "FAIL cell (m=" << r->m << ", T=" << r->T << ", n_star=" << r->n_star << "):"
              << (r->lower_ok ? "" : " lower bound exceeds 1/d") << (r->sai_ok ? "" : " sai norm below minimal norm")
              << (r->bstar_ok ? "" : " sai norm above B*") << "\n";
  }
  std::cout << rows.size() - failed << "/" << rows.size() << " cells ordered\n";
  return failed == 0 ? 0 : 1;
}

const sai::CalibrationConstants* maybe_calibration(const Options& o, const cli::RunConfig& cfg,
                                                   sai::CalibrationConstants& storage) {
  if (!cfg.check_sai) return nullptr;
  storage = cli::load_calibration(o.calibration, cfg);
  return &storage;
}

int cmd_verify(const Options& o) {
  const cli::RunConfig cfg = load(o);
  sai::CalibrationConstants cal;
  const cli::BoundReport report = cli::run_verify(cfg, maybe_calibration(o, cfg, cal));
  write_file(cfg.output_dir / "verify.csv", cli::report_csv(report));
  if (cfg.plot) write_file(cfg.output_dir / "verify.svg", cli::verify_plot(report));
  std::vector<const cli::BoundRow*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  return report_rows(rows);
}

int cmd_sweep(const Options& o, const std::string& axis_name, const std::string& values_text) {
  const cli::RunConfig cfg = load(o);
  const cli::SweepAxis axis = cli::parse_axis(axis_name);
  const std::vector<double> values = cli::parse_real_list(values_text);
  sai::CalibrationConstants cal;
  const auto points = cli::run_sweep(cfg, maybe_calibration(o, cfg, cal), axis, values);
  write_file(cfg.output_dir / "sweep.csv", cli::sweep_csv(axis, points));
  if (cfg.plot) write_file(cfg.output_dir / "sweep.svg", cli::sweep_plot(axis, points));
  std::vector<const cli::BoundRow*> rows;
  for (const auto& p : points) rows.push_back(&p.row);
  return report_rows(rows);
}

int cmd_calibrate(const Options& o, double max_drift) {
  const cli::RunConfig cfg = load(o);
  const sai::CalibrationConstants cal = sai::calibrate_constants(sai::CalibrationGrid{}, cfg.precision, max_drift);
  const fs::path path = o.calibration.empty() ? cfg.output_dir / "calibration.txt" : fs::path(o.calibration);
  write_file(path, sai::format_calibration(cal));
  std::cout << sai::format_calibration(cal);
  return 0;
}

int cmd_counting(const Options& o) {
  const cli::RunConfig cfg = load(o);
  const spectra::Spectrum s = cfg.spectrum.gram_spectrum();
  std::vector<double> rho;
  for (int i = 0; i < cfg.rho_points; ++i) {
    const double f = cfg.rho_points == 1 ? 0.0 : static_cast<double>(i) / (cfg.rho_points - 1);
    rho.push_back(cfg.rho_min * std::pow(cfg.rho_max / cfg.rho_min, f));
  }
  std::string csv;
  std::size_t total = 0;
  for (int ns : cfg.n_star) {
    const auto v = counting::check_counting_lemmas(s, spectra::analyze_gaps(s, ns), rho);
    total += v.size();
    const std::string body = counting::violations_csv(v);
    csv += csv.empty() ? body : body.substr(body.find('\n') + 1);
  }
  write_file(cfg.output_dir / "counting.csv", csv);
  std::cout << total << " counting violations\n";
  return total == 0 ? 0 : 1;
}

int cmd_distance(const Options& o) {
  const cli::RunConfig cfg = load(o);
  const spectra::Spectrum s = cfg.spectrum.gram_spectrum();
  std::string csv = gram::distance_csv_header();
  for (double T : cfg.T)
    for (int m : cfg.m) csv += gram::distance_csv_row(gram::distance(s, T, m, cfg.precision), T);
  write_file(cfg.output_dir / "distance.csv", csv);
  return 0;
}

int cmd_construct(const Options& o) {
  cli::RunConfig cfg = load(o);
  cfg.check_sai = true;
  sai::CalibrationConstants cal;
  maybe_calibration(o, cfg, cal);
  const spectra::Spectrum s = cfg.spectrum.gram_spectrum();
  std::string family_csv = "T,m,log_norm,max_residual,parseval_relative_gap,support_leak,bits\n";
  std::string samples_csv = "T,m,t,sigma\n";
  bool ok = true;
  for (double T : cfg.T) {
    const spectra::GapProfile p = spectra::analyze_gaps(s, cfg.n_star.front());
    const sai::MollifierParams params = sai::choose_params(T, p.gamma_min_star, cal);
    sai::FamilyDiagnostics diag;
    const BiorthogonalFamily fam = sai::sai_family(s, p, cfg.m, T, params, cfg.precision, cfg.sai_tolerance, &diag);
    for (std::size_t i = 0; i < fam.indices.size(); ++i) {
      double worst = 0.0;
      for (double r : fam.residuals[i]) worst = std::max(worst, r);
      ok = ok && worst <= cfg.sai_tolerance && diag.parseval_relative_gap[i] <= cfg.sai_tolerance;
      family_csv += format_sci(T) + "," + std::to_string(fam.indices[i]) + "," +
                    format_sci(fam.norms[i].log_double()) + "," + format_sci(worst) + "," +
                    format_sci(diag.parseval_relative_gap[i]) + "," + format_sci(diag.support_leak[i]) + "," +
                    std::to_string(diag.bits_used[i]) + "\n";
      for (std::size_t j = 0; j < fam.sample_times.size(); ++j)
        samples_csv += format_sci(T) + "," + std::to_string(fam.indices[i]) + "," + format_sci(fam.sample_times[j]) +
                       "," + format_sci(fam.coefficients[i][j]) + "\n";
    }
  }
  write_file(cfg.output_dir / "family.csv", family_csv);
  write_file(cfg.output_dir / "samples.csv", samples_csv);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biorthogonal families to exponentials: bounds, oracles and constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Run configuration (INI)")->check(CLI::ExistingFile);
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--digits", o.digits, "Working precision in decimal digits")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", o.tolerance, "Slack of the lower-bound comparison")->check(CLI::NonNegativeNumber);
  app.add_flag("--plot", o.plot, "Also write an SVG plot");
  app.add_option("--calibration", o.calibration, "Calibration file (overrides $BIORTHO_CALIBRATION)");

  std::string axis = "T", values;
  double max_drift = 0.05;
  auto* verify = app.add_subcommand("verify", "Check the ordered chain of bounds on every (m, T) cell");
  auto* sweep = app.add_subcommand("sweep", "Repeat the chain along one parameter axis");
  sweep->add_option("--axis", axis, "T, scale, truncation or m")->required();
  sweep->add_option("--values", values, "Comma-separated axis values")->required();
  auto* calibrate = app.add_subcommand("calibrate", "Measure the mollifier and growth constants");
  calibrate->add_option("--max-drift", max_drift, "Allowed relative change under grid refinement");
  auto* counting_cmd = app.add_subcommand("counting-check", "Exact counts against the counting bounds");
  auto* distance = app.add_subcommand("distance", "Gram distances d_{T,m}");
  auto* construct = app.add_subcommand("construct", "Build the explicit family and its residuals");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*verify) return cmd_verify(o);
    if (*sweep) return cmd_sweep(o, axis, values);
    if (*calibrate) return cmd_calibrate(o, max_drift);
    if (*counting_cmd) return cmd_counting(o);
    if (*distance) return cmd_distance(o);
    if (*construct) return cmd_construct(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
