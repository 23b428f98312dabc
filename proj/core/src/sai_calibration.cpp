#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "biortho/core/errors.hpp"
#include "biortho/sai/sai.hpp"

namespace biortho::sai {

namespace {

constexpr const char* kFormat = "biortho-calibration/1";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "quadratic:r,b" is lambda_n = r (n + b)^2; "bessel:alpha" the Bessel-type family.
spectra::Spectrum named_spectrum(const std::string& name, int N) {
  const auto colon = name.find(':');
  require(colon != std::string::npos, "spectrum name needs kind:params", ErrorKind::parse);
  const std::string kind = name.substr(0, colon);
  std::vector<double> args;
  std::stringstream ss(name.substr(colon + 1));
  for (std::string tok; std::getline(ss, tok, ',');) args.push_back(std::stod(tok));
  if (kind == "quadratic") {
    require(args.size() == 2, "quadratic:r,b expected", ErrorKind::parse);
    const double r = args[0], b = args[1];
    return spectra::gen_quadratic(r, 2.0 * r * b, r * b * b, N);
  }
  if (kind == "bessel") {
    require(args.size() == 1, "bessel:alpha expected", ErrorKind::parse);
    return spectra::gen_bessel_like(args[0], 1.0, N);
  }
  fail(ErrorKind::parse, "unknown spectrum kind " + kind);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

// As N' -> infinity the branch-2 ratio at y = N'^2 s tends to theta0^2 s^{-3/2} G(s) / 2 with
// G(s) = int_0^s -ln|cos v| v^{-3/2} dv; returns its infimum over 0 < s <= theta0.
double continuum_theta1(double theta0) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto piece = [&](double a, double b) {
    // Split at the logarithmic singularities (2n+1) pi/2; near an endpoint that is a
    // singularity, |cos v| = sin(distance), taken from the complement tanh_sinh supplies.
    double acc = 0.0, lo = a;
    for (double sing = std::numbers::pi / 2.0; lo < b; sing += std::numbers::pi) {
      if (sing <= lo) continue;
      const double hi = std::min(b, sing);
      const bool lo_sing = std::fabs(std::remainder(lo - std::numbers::pi / 2.0, std::numbers::pi)) < 1e-12;
      const bool hi_sing = hi == sing;
      auto f = [&](double v, double vc) {
        if (v < 1e-4) return std::sqrt(v) * (0.5 + v * v / 12.0);
        double c = std::fabs(std::cos(v));
        if (vc > 0.0 && hi_sing) c = std::sin(vc);
        if (vc < 0.0 && lo_sing) c = std::sin(-vc);
        return -std::log(c) * std::pow(v, -1.5);
      };
      acc += ts.integrate(f, lo, hi);
      lo = hi;
    }
    return acc;
  };
  const int steps = 4000;
  double G = 0.0, prev = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= steps; ++i) {
    const double s = theta0 * i / steps;
    G += piece(prev, s);
    prev = s;
    best = std::min(best, 0.5 * theta0 * theta0 * std::pow(s, -1.5) * G);
  }
  return best;
}

double log_add(double a, double b) {
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace

LogValue theoretical_B_star(const spectra::GapProfile& p, double lambda_m, double lambda_Nstar, double T,
                            const CalibrationConstants& cal) {
  p.validate();
  require(T > 0.0 && lambda_m > 0.0, "B* needs T > 0 and lambda_m > 0", ErrorKind::invalid_argument);
  require(cal.C_u_growth > 0.0, "B* needs C_u > 0", ErrorKind::invalid_argument);
  const double g = p.gamma_min, gs = p.gamma_min_star, M = p.m_star, Cu = cal.C_u_growth;
  const double lfact = std::lgamma(8.0 * M + 1.0);
  double first, last;
  if (T <= 1.0 / (gs * gs)) {
    first = lfact - 4.0 * M * std::log(lambda_m * gs * gs * T * T);
    last = log_add(-1.5 * std::log(T), -std::log(gs * gs * T * T));
  } else {
    first = 8.0 * M * std::log(gs) + lfact - 4.0 * M * std::log(lambda_m);
    last = std::log(gs * gs + gs * gs * gs);
  }
  const double log_B = std::log(Cu) + log_add(first, 0.0) + Cu * M + Cu * lambda_Nstar / (g * std::sqrt(lambda_m)) + last;
  const double total = -2.0 * lambda_m * T + cal.theorem_C / (T * gs * gs) +
                       cal.theorem_C * std::sqrt(lambda_m) / gs + log_B;
  return LogValue::from_log(total);
}

CalibrationGrid CalibrationGrid::refined() const {
  CalibrationGrid r = *this;
  for (int n : {5, 10, 20, 48})
    if (std::find(r.n_primes.begin(), r.n_primes.end(), n) == r.n_primes.end()) r.n_primes.push_back(n);
  std::sort(r.n_primes.begin(), r.n_primes.end());
  r.y_max_factor *= 2.0;
  r.y_steps_per_unit *= 2.0;
  r.theta2_points *= 2;
  r.growth_points *= 2;
  r.growth_truncation = r.growth_truncation * 3 / 2;
  r.growth_x_max *= 2.0;
  for (double t : {0.06, 0.125, 0.35})
    if (std::find(r.norm_T.begin(), r.norm_T.end(), t) == r.norm_T.end()) r.norm_T.push_back(t);
  for (int m : {3})
    if (std::find(r.norm_m.begin(), r.norm_m.end(), m) == r.norm_m.end()) r.norm_m.push_back(m);
  return r;
}

CalibrationConstants calibrate_once(const CalibrationGrid& grid) {
  require(!grid.n_primes.empty(), "calibration needs N' values", ErrorKind::invalid_argument);
  CalibrationConstants cal;

  // theta2 = sup_y (-ln P(iy)) / sqrt(y) with C = 1 (the lemmas depend on C x only).
  // The ratio rises to its y -> infinity limit sqrt(2 pi) (1 - sqrt 2) zeta(1/2).
  cal.theta2 = std::sqrt(2.0 * std::numbers::pi) * (1.0 - std::numbers::sqrt2) * boost::math::zeta(0.5);
  for (int np : grid.n_primes) {
    const CosineProduct cp(1.0, np);
    for (double y : log_grid(1e-2, grid.theta2_y_max, grid.theta2_points))
      cal.theta2 = std::max(cal.theta2, -cp.log_P_imag(y) / std::sqrt(y));
  }

  // theta1(theta0) = min over the grid of -ln|P(x)| divided by the branch profile.
  struct Sample {
    int np;
    double y, minus_log;
  };
  std::vector<Sample> samples;
  for (int np : grid.n_primes) {
    const CosineProduct cp(1.0, np);
    const double step = static_cast<double>(np) * np / grid.y_steps_per_unit;
    const long count = static_cast<long>(grid.y_max_factor * grid.y_steps_per_unit);
    for (long j = 1; j <= count; ++j) {
      int sign = 0;
      const double l = cp.log_abs_real(j * step, sign);
      if (sign != 0) samples.push_back({np, j * step, -l});
    }
  }
  std::vector<double> candidates = grid.theta0_candidates;
  if (candidates.empty())
    for (int k = -12; k <= 24; ++k) candidates.push_back(std::pow(2.0, k / 6.0));
  auto profile = [](double y, int np, double t0) {
    const double q = std::sqrt(y / t0);
    return (q + 1.0 >= np) ? q / 8.0 : (y / t0) * (y / t0) / std::pow(np, 3.0);
  };
  double best = std::numeric_limits<double>::infinity();
  for (double t0 : candidates) {
    double t1 = std::numeric_limits<double>::infinity();
    for (const Sample& s : samples) t1 = std::min(t1, s.minus_log / profile(s.y, s.np, t0));
    const double score = t0 / (t1 * t1);
    if (t1 > 0.0 && score < best) {
      best = score;
      cal.theta0 = t0;
      cal.theta1 = t1;
    }
  }
  // The grid minimum overestimates the infimum: polish every low local minimum.
  {
    const double t0 = cal.theta0;
    double t1 = cal.theta1;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
      const Sample &a = samples[i - 1], &s = samples[i], &b = samples[i + 1];
      if (a.np != s.np || b.np != s.np) continue;
      const double r = s.minus_log / profile(s.y, s.np, t0);
      if (r > 1.5 * cal.theta1 || r > a.minus_log / profile(a.y, a.np, t0) ||
          r > b.minus_log / profile(b.y, b.np, t0))
        continue;
      const CosineProduct cp(1.0, s.np);
      auto ratio = [&](double y) {
        int sign = 0;
        const double l = cp.log_abs_real(y, sign);
        return sign == 0 ? std::numeric_limits<double>::infinity() : -l / profile(y, s.np, t0);
      };
      double lo = a.y, hi = b.y;
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double c1 = hi - phi * (hi - lo), c2 = lo + phi * (hi - lo);
      double f1 = ratio(c1), f2 = ratio(c2);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = c2;
          c2 = c1;
          f2 = f1;
          c1 = hi - phi * (hi - lo);
          f1 = ratio(c1);
        } else {
          lo = c1;
          c1 = c2;
          f1 = f2;
          c2 = lo + phi * (hi - lo);
          f2 = ratio(c2);
        }
      }
      t1 = std::min({t1, r, f1, f2});
    }
    cal.theta1 = std::min(t1, continuum_theta1(t0));
  }

  // C_u = sup gamma_min (ln|F_m(z)| + tail) / (sqrt|z| + sqrt(lambda_m)).
  for (const std::string& name : grid.growth_spectra) {
    const spectra::Spectrum s = named_spectrum(name, grid.growth_truncation);
    const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
    for (int m : grid.growth_m) {
      if (m >= static_cast<int>(s.size())) continue;
      const double sl = std::sqrt(s.lambda(m));
      for (double angle : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const std::complex<double> dir = std::polar(1.0, angle * std::numbers::pi);
        for (double x : log_grid(1e-2, grid.growth_x_max, grid.growth_points)) {
          const WeierstrassValue w = log_weierstrass(s, p, m, x * dir);
          require(std::isfinite(w.log_tail_bound), "growth calibration needs a longer truncation",
                  ErrorKind::truncation);
          if (w.value.is_zero()) continue;
          const double v = p.gamma_min * (w.value.log_double() + w.log_tail_bound) / (std::sqrt(x) + sl);
          cal.C_u_growth = std::max(cal.C_u_growth, v);
        }
      }
    }
  }
  cal.theta3 = 128.0 * cal.theta0 * cal.C_u_growth * cal.C_u_growth / (cal.theta1 * cal.theta1);

  // theorem_C: smallest C for which the norm bound dominates on the norm grid.
  CalibrationConstants base = cal;
  base.theorem_C = 0.0;
  double need = 0.0;
  for (const std::string& name : grid.norm_spectra) {
    const spectra::Spectrum s = named_spectrum(name, grid.norm_truncation);
    const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
    const double lNs = s.lambda(p.n_star_upper), gs = p.gamma_min_star;
    for (double T : grid.norm_T) {
      const MollifierParams mp = choose_params(T, gs, cal);
      for (int m : grid.norm_m) {
        const double lm = s.lambda(m);
        const double lhs = 2.0 * sai_norm(s, p, m, T, mp).log_double();
        const double rhs0 = theoretical_B_star(p, lm, lNs, T, base).log_double();
        need = std::max(need, (lhs - rhs0) / (1.0 / (T * gs * gs) + std::sqrt(lm) / gs));
      }
    }
  }
  cal.theorem_C = need;
  return cal;
}

CalibrationConstants calibrate_constants(const CalibrationGrid& grid, const PrecisionContext& ctx,
                                         double max_drift) {
  ctx.validate();
  const CalibrationConstants a = calibrate_once(grid);
  CalibrationConstants b = calibrate_once(grid.refined());
  const std::pair<const char*, double CalibrationConstants::*> fields[] = {
      {"theta0", &CalibrationConstants::theta0}, {"theta1", &CalibrationConstants::theta1},
      {"theta2", &CalibrationConstants::theta2}, {"theta3", &CalibrationConstants::theta3},
      {"C_u_growth", &CalibrationConstants::C_u_growth}, {"theorem_C", &CalibrationConstants::theorem_C}};
  b.provenance = {{"format", kFormat}, {"grid", "refined"}};
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, ptr] : fields) {
    const double x = a.*ptr, y = b.*ptr;
    const double drift = (x == y) ? 0.0 : std::fabs(y - x) / std::max(std::fabs(y), std::fabs(x));
    b.provenance.emplace_back(std::string("drift.") + name, fmt(drift));
    if (drift > worst) {
      worst = drift;
      worst_name = name;
    }
  }
  if (worst > max_drift)
    fail(ErrorKind::non_convergence,
         "calibration unstable under refinement: " + worst_name + " drifted by " + fmt(worst));
  return b;
}

std::string format_calibration(const CalibrationConstants& cal) {
  std::ostringstream out;
  out << "# biortho calibration constants\n";
  out << "format=" << kFormat << "\n";
  out << "theta0=" << fmt(cal.theta0) << "\n";
  out << "theta1=" << fmt(cal.theta1) << "\n";
  out << "theta2=" << fmt(cal.theta2) << "\n";
  out << "theta3=" << fmt(cal.theta3) << "\n";
  out << "C_u_growth=" << fmt(cal.C_u_growth) << "\n";
  out << "theorem_C=" << fmt(cal.theorem_C) << "\n";
  for (const auto& [k, v] : cal.provenance)
    if (k != "format") out << "provenance." << k << "=" << v << "\n";
  return out.str();
}

CalibrationConstants parse_calibration(const std::string& text) {
  std::map<std::string, std::string> kv;
  CalibrationConstants cal;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "calibration line " + std::to_string(line_no) + " lacks '='", ErrorKind::parse);
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key.rfind("provenance.", 0) == 0)
      cal.provenance.emplace_back(key.substr(11), value);
    else
      kv[key] = value;
  }
  require(kv["format"] == kFormat, "unsupported calibration format '" + kv["format"] + "'", ErrorKind::parse);
  auto num = [&](const char* key) {
    const auto it = kv.find(key);
    require(it != kv.end(), std::string("calibration lacks ") + key, ErrorKind::parse);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == it->second.size() && used > 0, std::string("bad number for ") + key, ErrorKind::parse);
    return v;
  };
  cal.theta0 = num("theta0");
  cal.theta1 = num("theta1");
  cal.theta2 = num("theta2");
  cal.theta3 = num("theta3");
  cal.C_u_growth = num("C_u_growth");
  cal.theorem_C = num("theorem_C");
  cal.validate();
  return cal;
}

CalibrationConstants read_calibration_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read calibration file " + path, ErrorKind::io);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

void write_calibration_file(const CalibrationConstants& cal, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write calibration file " + path, ErrorKind::io);
  out << format_calibration(cal);
  require(static_cast<bool>(out), "failed writing calibration file " + path, ErrorKind::io);
}

}  // namespace biortho::sai
