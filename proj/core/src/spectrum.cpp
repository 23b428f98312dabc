#include "biortho/spectra/spectrum.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "biortho/core/errors.hpp"

namespace biortho::spectra {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string GeneratorDescriptor::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  fail(ErrorKind::invalid_argument, "generator has no parameter '" + key + "'");
}

std::string GeneratorDescriptor::to_config() const {
  std::string out = "kind=" + kind + "\n";
  for (const auto& [k, v] : params) out += k + "=" + v + "\n";
  return out;
}

GeneratorDescriptor GeneratorDescriptor::from_config(const std::string& text) {
  GeneratorDescriptor g;
  g.kind.clear();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "generator line without '=': " + line, ErrorKind::parse);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kind") {
      g.kind = value;
    } else {
      g.params.emplace_back(key, value);
    }
  }
  require(!g.kind.empty(), "generator descriptor lacks kind", ErrorKind::parse);
  return g;
}

Spectrum::Spectrum(std::vector<double> values, GeneratorDescriptor generator)
    : values_(std::move(values)), generator_(std::move(generator)) {
  require(!values_.empty(), "spectrum must be non-empty", ErrorKind::invalid_argument);
  require(std::isfinite(values_[0]) && values_[0] >= 0.0, "lambda_1 must be finite and nonnegative",
          ErrorKind::invalid_argument);
  for (std::size_t i = 1; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]) && values_[i] > values_[i - 1],
            "spectrum must be strictly increasing (index " + std::to_string(i + 1) + ")",
            ErrorKind::invalid_argument);
  }
}

double Spectrum::lambda(std::size_t n) const {
  require(n >= 1 && n <= values_.size(), "spectrum index out of range", ErrorKind::invalid_argument);
  return values_[n - 1];
}

Spectrum Spectrum::truncated(std::size_t n) const {
  require(n >= 1 && n <= values_.size(), "truncation beyond spectrum length", ErrorKind::invalid_argument);
  return Spectrum(std::vector<double>(values_.begin(), values_.begin() + static_cast<long>(n)), generator_);
}

Spectrum Spectrum::scaled(double factor) const {
  require(factor > 0.0, "scale factor must be positive", ErrorKind::invalid_argument);
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  GeneratorDescriptor g = generator_;
  g.params.emplace_back("scaled_by", format_double(factor));
  return Spectrum(std::move(v), std::move(g));
}

Spectrum gen_quadratic(double r, double b, double c, int N) {
  require(r > 0.0, "quadratic generator needs r > 0", ErrorKind::invalid_argument);
  require(c >= 0.0, "quadratic generator needs c >= 0", ErrorKind::invalid_argument);
  require(N >= 1, "quadratic generator needs N >= 1", ErrorKind::invalid_argument);
  std::vector<double> v;
  v.reserve(N);
  for (int n = 1; n <= N; ++n) {
    const double x = r * n * n + b * n + c;
    require(x >= 0.0, "quadratic generator produced a negative value at n=" + std::to_string(n),
            ErrorKind::invalid_argument);
    require(v.empty() || x > v.back(),
            "quadratic generator is not strictly increasing at n=" + std::to_string(n),
            ErrorKind::invalid_argument);
    v.push_back(x);
  }
  GeneratorDescriptor g{"quadratic",
                        {{"r", format_double(r)}, {"b", format_double(b)}, {"c", format_double(c)},
                         {"N", std::to_string(N)}}};
  return Spectrum(std::move(v), std::move(g));
}

double bessel_order(double alpha) {
  require(alpha >= 0.0 && alpha < 2.0, "alpha must lie in [0, 2)", ErrorKind::invalid_argument);
  return std::fabs(1.0 - alpha) / (2.0 - alpha);
}

Spectrum gen_bessel_like(double alpha, double scale, int N) {
  require(scale > 0.0, "bessel generator needs scale > 0", ErrorKind::invalid_argument);
  require(N >= 1, "bessel generator needs N >= 1", ErrorKind::invalid_argument);
  const double nu = bessel_order(alpha);
  const double mu = 4.0 * nu * nu;
  std::vector<double> v;
  v.reserve(N);
  double previous = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double beta = (n + nu / 2.0 - 0.25) * std::numbers::pi;
    const double b8 = 8.0 * beta;
    double x = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8) -
               32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(b8, 5));
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const double f = boost::math::cyl_bessel_j(nu, x);
      const double df = boost::math::cyl_bessel_j_prime(nu, x);
      const double step = f / df;
      x -= step;
      if (std::fabs(step) <= 4e-16 * std::fabs(x)) {
        converged = true;
        break;
      }
    }
    require(converged && std::isfinite(x), "Newton iteration for Bessel zero " + std::to_string(n) +
                                               " did not converge",
            ErrorKind::non_convergence);
    // Consecutive zeros are roughly pi apart; anything else means Newton
    // landed on the wrong zero.
    const double spacing = x - previous;
    require(x > nu && (n == 1 || (spacing > 2.0 && spacing < 4.5)),
            "Newton iteration for Bessel zero " + std::to_string(n) + " left its bracket",
            ErrorKind::non_convergence);
    previous = x;
    v.push_back(scale * x * x);
  }
  GeneratorDescriptor g{"bessel",
                        {{"alpha", format_double(alpha)}, {"scale", format_double(scale)},
                         {"N", std::to_string(N)}}};
  return Spectrum(std::move(v), std::move(g));
}

Spectrum parse_spectrum(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
    require(ec == std::errc() && ptr == line.data() + line.size(),
            "line " + std::to_string(line_no) + ": not a decimal literal: '" + line + "'", ErrorKind::parse);
    values.push_back(x);
  }
  return Spectrum(std::move(values), GeneratorDescriptor{"file", {}});
}

Spectrum read_spectrum_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open spectrum file " + path.string(), ErrorKind::io);
  std::stringstream buf;
  buf << in.rdbuf();
  Spectrum s = parse_spectrum(buf.str());
  GeneratorDescriptor g{"file", {{"path", path.string()}}};
  return Spectrum(std::vector<double>(s.values().begin(), s.values().end()), std::move(g));
}

std::string format_spectrum(const Spectrum& s) {
  std::string out = "# generator: " + s.generator().kind + "\n";
  for (const auto& [k, v] : s.generator().params) out += "# " + k + "=" + v + "\n";
  for (double x : s.values()) out += format_double(x) + "\n";
  return out;
}

void write_spectrum_file(const Spectrum& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write spectrum file " + path.string(), ErrorKind::io);
  out << format_spectrum(s);
}

}  // namespace biortho::spectra
