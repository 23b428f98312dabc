#include "report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "biortho/core/errors.hpp"
#include "biortho/core/format.hpp"
#include "biortho/core/log_value.hpp"
#include "biortho/gram/gram.hpp"
#include "biortho/guichal/guichal.hpp"
#include "biortho/spectra/gaps.hpp"

namespace biortho::cli {

namespace {

struct Spectra {
  spectra::Spectrum gram;
  std::optional<spectra::Spectrum> sai;
};

Spectra build_spectra(const RunConfig& cfg) {
  Spectra sp{cfg.spectrum.gram_spectrum(), std::nullopt};
  if (cfg.check_sai) sp.sai = cfg.spectrum.sai_spectrum();
  return sp;
}

std::string cell_name(double T, int n_star, int m) {
  std::ostringstream ss;
  ss << "cell (m=" << m << ", T=" << T << ", n_star=" << n_star << ")";
  return ss.str();
}

BoundRow cell(const RunConfig& cfg, const Spectra& sp, const sai::CalibrationConstants* cal, double T, int n_star,
              int m) {
  const spectra::Spectrum& sg = sp.gram;
  require(static_cast<std::size_t>(m) < sg.size(), "m must be below the truncation length",
          ErrorKind::invalid_argument);
  BoundRow row;
  row.T = T;
  row.n_star = n_star;
  row.m = m;

  const gram::DistanceResult dist = gram::distance(sg, T, m, cfg.precision);
  row.digits_used = dist.precision_used;
  row.log_inverse_distance = -dist.d.log_double();
  row.log_minimal_growing = row.log_inverse_distance - sg.lambda(m) * T;

  if (cfg.check_lower) {
    const Bits bits = cfg.precision.bits();
    const spectra::GapProfile pg = spectra::analyze_gaps(sg, n_star);
    std::vector<guichal::LowerBoundResult> candidates{
        guichal::lower_bound_one_gap(T, pg.gamma_max, sg.lambda(1), m, bits),
        guichal::lower_bound_two_gap(sg, pg, T, m, bits),
        guichal::best_lower_bound(sg, T, m, m, static_cast<int>(sg.size()) - 1, bits)};
    const auto best = std::max_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      return a.bound_on_inverse_distance < b.bound_on_inverse_distance;
    });
    row.regime = guichal::to_string(best->regime);
    row.log_lower = best->bound_on_inverse_distance.log_double() + cfg.lower_bound_log_inflation;
    row.lower_ok = *row.log_lower <= row.log_inverse_distance + cfg.tolerance;
  }

  if (cfg.check_sai) {
    require(cal != nullptr, "the sai check needs calibration constants", ErrorKind::precondition);
    const spectra::Spectrum& ss = *sp.sai;
    require(static_cast<std::size_t>(m) < ss.size(), "m must be below the sai truncation length",
            ErrorKind::invalid_argument);
    const spectra::GapProfile ps = spectra::analyze_gaps(ss, n_star);
    const sai::MollifierParams params = sai::choose_params(T, ps.gamma_min_star, *cal);
    row.log_sai = sai::sai_norm(ss, ps, m, T, params).log_double();
    row.sai_ok = *row.log_sai >= row.log_minimal_growing - cfg.sai_tolerance;
    if (cfg.check_bstar) {
      const LogValue b = sai::theoretical_B_star(ps, ss.lambda(m), ss.lambda(ps.n_star_upper), T, *cal);
      row.log_bstar = 0.5 * b.log_double();
      row.bstar_ok = *row.log_sai <= *row.log_bstar;
    }
  }
  return row;
}

struct Task {
  double T;
  int n_star;
  int m;
};

std::vector<BoundRow> run_tasks(const RunConfig& cfg, const Spectra& sp, const sai::CalibrationConstants* cal,
                                const std::vector<Task>& tasks) {
  std::vector<BoundRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = cell(cfg, sp, cal, tasks[i].T, tasks[i].n_star, tasks[i].m);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(tasks.size(), cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = cell_name(tasks[i].T, tasks[i].n_star, tasks[i].m);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::precondition, where + ": " + e.what());
    }
  }
  return rows;
}

std::vector<Task> tasks_for(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (double T : cfg.T)
    for (int ns : cfg.n_star)
      for (int m : cfg.m) tasks.push_back({T, ns, m});
  return tasks;
}

std::string opt(const std::optional<double>& v) { return v ? format_sci(*v) : std::string(); }

std::string value(double log_v) { return LogValue::from_log(log_v).to_string(17); }

}  // namespace

bool BoundReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass(); });
}

BoundRow compute_cell(const RunConfig& config, const sai::CalibrationConstants* cal, double T, int n_star, int m) {
  config.validate();
  return cell(config, build_spectra(config), cal, T, n_star, m);
}

BoundReport run_verify(const RunConfig& config, const sai::CalibrationConstants* cal) {
  config.validate();
  return {run_tasks(config, build_spectra(config), cal, tasks_for(config))};
}

std::string report_csv_header() {
  return "T,n_star,m,regime,log_lower_bound,log_inverse_distance,log_minimal_growing_norm,log_sai_norm,"
         "log_bstar_norm,lower_margin,sai_margin,bstar_margin,inverse_distance,minimal_growing_norm,sai_norm,"
         "digits,pass\n";
}

std::string report_csv_row(const BoundRow& r) {
  std::ostringstream ss;
  auto margin = [](const std::optional<double>& hi, const std::optional<double>& lo) {
    return hi && lo ? format_sci(*hi - *lo) : std::string();
  };
  const std::optional<double> inv = r.log_inverse_distance, mg = r.log_minimal_growing;
  ss << format_sci(r.T) << ',' << r.n_star << ',' << r.m << ',' << r.regime << ',' << opt(r.log_lower) << ','
     << format_sci(r.log_inverse_distance) << ',' << format_sci(r.log_minimal_growing) << ',' << opt(r.log_sai)
     << ',' << opt(r.log_bstar) << ',' << margin(inv, r.log_lower) << ',' << margin(r.log_sai, mg) << ','
     << margin(r.log_bstar, r.log_sai) << ',' << value(r.log_inverse_distance) << ','
     << value(r.log_minimal_growing) << ',' << (r.log_sai ? value(*r.log_sai) : std::string()) << ','
     << r.digits_used << ',' << (r.pass() ? "true" : "false") << '\n';
  return ss.str();
}

std::string report_csv(const BoundReport& report) {
  std::string out = report_csv_header();
  for (const BoundRow& r : report.rows) out += report_csv_row(r);
  return out;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "T") return SweepAxis::T;
  if (name == "scale" || name == "gamma") return SweepAxis::scale;
  if (name == "truncation" || name == "N") return SweepAxis::truncation;
  if (name == "m") return SweepAxis::m;
  fail(ErrorKind::invalid_argument, "sweep axis must be one of T, scale, truncation, m");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::T: return "T";
    case SweepAxis::scale: return "scale";
    case SweepAxis::truncation: return "truncation";
    case SweepAxis::m: return "m";
  }
  return "?";
}

std::vector<SweepPoint> run_sweep(const RunConfig& config, const sai::CalibrationConstants* cal, SweepAxis axis,
                                  const std::vector<double>& values) {
  require(!values.empty(), "sweep needs at least one value", ErrorKind::invalid_argument);
  config.validate();
  std::vector<SweepPoint> out;
  for (double v : values) {
    RunConfig c = config;
    switch (axis) {
      case SweepAxis::T: c.T = {v}; break;
      case SweepAxis::scale: c.spectrum.stretch = config.spectrum.stretch * v; break;
      case SweepAxis::m:
        require(v == std::floor(v), "m sweep values must be integers", ErrorKind::invalid_argument);
        c.m = {static_cast<int>(v)};
        break;
      case SweepAxis::truncation:
        require(v == std::floor(v), "truncation sweep values must be integers", ErrorKind::invalid_argument);
        c.spectrum.truncation = static_cast<int>(v);
        break;
    }
    c.validate();
    for (BoundRow& r : run_tasks(c, build_spectra(c), cal, tasks_for(c))) out.push_back({v, std::move(r)});
  }
  return out;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepPoint>& points) {
  std::string out = "axis,value," + report_csv_header();
  for (const SweepPoint& p : points) out += to_string(axis) + "," + format_sci(p.value) + "," + report_csv_row(p.row);
  return out;
}

}  // namespace biortho::cli
