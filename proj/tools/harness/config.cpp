#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "biortho/core/errors.hpp"

namespace biortho::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used > 0 && used == text.size(), "config: bad number '" + text + "' for " + key, ErrorKind::parse);
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used > 0 && used == text.size(), "config: bad integer '" + text + "' for " + key, ErrorKind::parse);
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(ErrorKind::parse, "config: bad boolean '" + text + "' for " + key);
}

}  // namespace

spectra::Spectrum SpectrumSource::build(int N) const {
  spectra::Spectrum s = [&] {
    if (kind == "quadratic") return spectra::gen_quadratic(r, b, c, N);
    if (kind == "bessel") return spectra::gen_bessel_like(alpha, scale, N);
    if (kind == "file") {
      const spectra::Spectrum whole = spectra::read_spectrum_file(path);
      return N > 0 && static_cast<std::size_t>(N) < whole.size() ? whole.truncated(N) : whole;
    }
    fail(ErrorKind::invalid_argument, "unknown spectrum kind '" + kind + "'");
  }();
  return stretch == 1.0 ? s : s.scaled(stretch * stretch);
}

spectra::Spectrum SpectrumSource::gram_spectrum() const { return build(truncation); }

spectra::Spectrum SpectrumSource::sai_spectrum() const { return build(kind == "file" ? 0 : sai_truncation); }

void RunConfig::validate() const {
  require(!T.empty(), "config: at least one T is required", ErrorKind::invalid_argument);
  require(!m.empty(), "config: at least one m is required", ErrorKind::invalid_argument);
  require(!n_star.empty(), "config: at least one n_star is required", ErrorKind::invalid_argument);
  for (double t : T) require(t > 0.0, "config: every T must be positive", ErrorKind::invalid_argument);
  for (int i : m) require(i >= 1, "config: indices m start at 1", ErrorKind::invalid_argument);
  for (int i : n_star) require(i >= 1, "config: n_star starts at 1", ErrorKind::invalid_argument);
  require(spectrum.truncation >= 2, "config: truncation must be at least 2", ErrorKind::invalid_argument);
  require(spectrum.sai_truncation >= 2, "config: sai_truncation must be at least 2", ErrorKind::invalid_argument);
  require(spectrum.stretch > 0.0, "config: stretch must be positive", ErrorKind::invalid_argument);
  require(tolerance >= 0.0 && sai_tolerance >= 0.0, "config: tolerances must be nonnegative",
          ErrorKind::invalid_argument);
  require(rho_min > 0.0 && rho_max >= rho_min && rho_points >= 1, "config: bad rho grid",
          ErrorKind::invalid_argument);
  require(threads >= 0, "config: threads must be nonnegative", ErrorKind::invalid_argument);
  precision.validate();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& tok : split(text)) {
    const auto dash = tok.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(to_int("list", tok));
      continue;
    }
    const int lo = to_int("list", trim(tok.substr(0, dash))), hi = to_int("list", trim(tok.substr(dash + 1)));
    require(lo <= hi, "config: empty range '" + tok + "'", ErrorKind::parse);
    for (int i = lo; i <= hi; ++i) out.push_back(i);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split(text)) out.push_back(to_real("list", tok));
  return out;
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.T = {0.1, 1.0};
  cfg.m = {1, 2, 3, 4, 5};
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::parse, std::string("config: ") + e.what());
  }

  RunConfig cfg;
  static const std::set<std::string> sections{"spectrum", "run", "counting", "hooks"};
  for (const auto& [section, body] : tree) {
    require(!body.empty() || body.data().empty(), "config: key '" + section + "' outside a section",
            ErrorKind::parse);
    require(sections.count(section) == 1, "config: unknown section [" + section + "]", ErrorKind::parse);
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string v = trim(node.data());
      if (section == "spectrum") {
        if (key == "kind") cfg.spectrum.kind = v;
        else if (key == "r") cfg.spectrum.r = to_real(name, v);
        else if (key == "b") cfg.spectrum.b = to_real(name, v);
        else if (key == "c") cfg.spectrum.c = to_real(name, v);
        else if (key == "alpha") cfg.spectrum.alpha = to_real(name, v);
        else if (key == "scale") cfg.spectrum.scale = to_real(name, v);
        else if (key == "path") cfg.spectrum.path = v;
        else if (key == "truncation") cfg.spectrum.truncation = to_int(name, v);
        else if (key == "sai_truncation") cfg.spectrum.sai_truncation = to_int(name, v);
        else if (key == "stretch") cfg.spectrum.stretch = to_real(name, v);
        else fail(ErrorKind::parse, "config: unknown key " + name);
      } else if (section == "run") {
        if (key == "T") cfg.T = parse_real_list(v);
        else if (key == "m") cfg.m = parse_int_list(v);
        else if (key == "n_star") cfg.n_star = parse_int_list(v);
        else if (key == "digits") cfg.precision.working_digits = to_int(name, v);
        else if (key == "residual_target") cfg.precision.residual_target = to_real(name, v);
        else if (key == "max_escalations") cfg.precision.max_escalations = to_int(name, v);
        else if (key == "tolerance") cfg.tolerance = to_real(name, v);
        else if (key == "sai_tolerance") cfg.sai_tolerance = to_real(name, v);
        else if (key == "output") cfg.output_dir = v;
        else if (key == "calibration") cfg.calibration_path = v;
        else if (key == "plot") cfg.plot = to_bool(name, v);
        else if (key == "threads") cfg.threads = to_int(name, v);
        else if (key == "checks") {
          cfg.check_lower = cfg.check_sai = cfg.check_bstar = false;
          for (const std::string& c : split(v)) {
            if (c == "lower") cfg.check_lower = true;
            else if (c == "sai") cfg.check_sai = true;
            else if (c == "bstar") cfg.check_bstar = cfg.check_sai = true;
            else fail(ErrorKind::parse, "config: unknown check '" + c + "'");
          }
        } else fail(ErrorKind::parse, "config: unknown key " + name);
      } else if (section == "counting") {
        if (key == "rho_min") cfg.rho_min = to_real(name, v);
        else if (key == "rho_max") cfg.rho_max = to_real(name, v);
        else if (key == "rho_points") cfg.rho_points = to_int(name, v);
        else fail(ErrorKind::parse, "config: unknown key " + name);
      } else {
        if (key == "lower_bound_log_inflation") cfg.lower_bound_log_inflation = to_real(name, v);
        else fail(ErrorKind::parse, "config: unknown key " + name);
      }
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read config file " + path.string(), ErrorKind::io);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::filesystem::path resolve_calibration(const std::string& flag_path, const RunConfig& config) {
  if (!flag_path.empty()) return flag_path;
  if (const char* env = std::getenv("BIORTHO_CALIBRATION"); env != nullptr && *env != '\0') return env;
  if (!config.calibration_path.empty()) return config.calibration_path;
  for (const char* p : {BIORTHO_INSTALLED_CALIBRATION, BIORTHO_SOURCE_CALIBRATION})
    if (std::filesystem::exists(p)) return p;
  fail(ErrorKind::io, "no calibration file found; run 'biortho calibrate' or pass --calibration");
}

sai::CalibrationConstants load_calibration(const std::string& flag_path, const RunConfig& config) {
  return sai::read_calibration_file(resolve_calibration(flag_path, config).string());
}

}  // namespace biortho::cli
