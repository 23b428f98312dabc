#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace biortho::cli {

namespace {

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 80, kRight = 220, kTop = 40, kBottom = 60;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

struct Key {
  double T;
  int n_star, m;
  auto operator<=>(const Key&) const = default;
};

// Curves are grouped by (n_star, m), and also by T when T is not on the x axis.
std::vector<Series> chain_series(const std::vector<std::pair<double, const BoundRow*>>& rows, bool split_T) {
  std::map<Key, std::vector<Series>> groups;
  for (const auto& [x, r] : rows) {
    auto& g = groups[{split_T ? r->T : 0.0, r->n_star, r->m}];
    if (g.empty()) {
      std::string tag = " m=" + std::to_string(r->m) + " N*=" + std::to_string(r->n_star);
      if (split_T) tag += " T=" + num(r->T);
      g = {{"ln lower" + tag, {}}, {"ln 1/d" + tag, {}}, {"ln min norm" + tag, {}}, {"ln sai" + tag, {}},
           {"ln sqrt B*" + tag, {}}};
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    g[0].points.emplace_back(x, r->log_lower.value_or(nan));
    g[1].points.emplace_back(x, r->log_inverse_distance);
    g[2].points.emplace_back(x, r->log_minimal_growing);
    g[3].points.emplace_back(x, r->log_sai.value_or(nan));
    g[4].points.emplace_back(x, r->log_bstar.value_or(nan));
  }
  std::vector<Series> out;
  for (auto& [k, g] : groups)
    for (Series& s : g) {
      std::sort(s.points.begin(), s.points.end());
      const bool any = std::any_of(s.points.begin(), s.points.end(),
                                   [](const auto& p) { return std::isfinite(p.second); });
      if (any) out.push_back(std::move(s));
    }
  return out;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << escape(title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x0, x1)) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(px(t)) << "\" y2=\""
      << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(t)
      << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(t)) << "\" x2=\"" << kLeft << "\" y2=\"" << num(py(t))
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">" << num(t)
      << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::string path;
    bool pen_up = true;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen_up = true;
        continue;
      }
      path += (pen_up ? "M" : "L") + num(px(x)) + "," + num(py(y)) + " ";
      pen_up = false;
    }
    o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : series[i].points)
      if (std::isfinite(x) && std::isfinite(y))
        o << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    const double ly = kTop + 10 + 16.0 * static_cast<double>(i);
    o << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << num(ly) << "\" x2=\"" << kWidth - kRight + 32
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << num(ly + 4) << "\">" << escape(series[i].label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string verify_plot(const BoundReport& report) {
  std::vector<std::pair<double, const BoundRow*>> rows;
  for (const BoundRow& r : report.rows) rows.emplace_back(1.0 / r.T, &r);
  return svg_line_chart("Norms and bounds", "1/T", "natural log", chain_series(rows, false));
}

std::string sweep_plot(SweepAxis axis, const std::vector<SweepPoint>& points) {
  std::vector<std::pair<double, const BoundRow*>> rows;
  for (const SweepPoint& p : points) rows.emplace_back(axis == SweepAxis::T ? 1.0 / p.value : p.value, &p.row);
  const std::string x_label = axis == SweepAxis::T ? "1/T" : to_string(axis);
  return svg_line_chart("Sweep over " + to_string(axis), x_label, "natural log",
                        chain_series(rows, axis != SweepAxis::T));
}

}  // namespace biortho::cli
