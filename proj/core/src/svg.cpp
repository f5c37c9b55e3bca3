#include "eigenlab/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "eigenlab/errors.hpp"

namespace eigenlab {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 80, kRight = 230, kTop = 40, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi - lo < 1e-3) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

// Tick positions at 1, 2, 5 times powers of ten, thinned to at most ~8.
std::vector<double> ticks(const Range& r) {
  std::vector<double> out;
  for (int e = static_cast<int>(std::floor(r.lo)) - 1; e <= static_cast<int>(std::ceil(r.hi)); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double t = e + std::log10(m);
      if (t >= r.lo && t <= r.hi) out.push_back(t);
    }
  }
  if (out.size() > 8) {
    std::vector<double> decades;
    for (double t : out) {
      if (std::fabs(t - std::round(t)) < 1e-12) decades.push_back(t);
    }
    if (decades.size() >= 2) return decades;
  }
  return out;
}

std::string tick_label(double log_v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::pow(10.0, log_v));
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

std::string svg_loglog(const std::string& title, const std::vector<PlotSeries>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xr.add(std::log10(p.lambda));
      yr.add(std::log10(p.value));
    }
  }
  if (xr.lo > xr.hi) throw UsageError("nothing to plot for '" + title + "'");
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double lx) { return kLeft + (lx - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto Y = [&](double ly) { return kTop + (yr.hi - ly) / (yr.hi - yr.lo) * ph; };
  // Lines are clipped to the plot box by the clipPath below.
  auto line = [&](double slope, double x0, double y0, const std::string& style) {
    const double ya = y0 + slope * (xr.lo - x0), yb = y0 + slope * (xr.hi - x0);
    return "<line x1=\"" + num(X(xr.lo)) + "\" y1=\"" + num(Y(ya)) + "\" x2=\"" + num(X(xr.hi)) + "\" y2=\"" +
           num(Y(yb)) + "\" style=\"" + style + "\" clip-path=\"url(#plot)\"/>\n";
  };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") + "\" height=\"" +
       num(kHeight, "%.0f") + "\" viewBox=\"0 0 " + num(kWidth, "%.0f") + " " + num(kHeight, "%.0f") + "\">\n";
  o += "<defs><clipPath id=\"plot\"><rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\"/></clipPath></defs>\n";
  o += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" style=\"fill:#ffffff\"/>\n";
  o += "<text x=\"" + num(kLeft) + "\" y=\"24\" style=\"font-family:sans-serif;font-size:15px;fill:#000\">" +
       escape(title) + "</text>\n";
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" style=\"fill:none;stroke:#000;stroke-width:1\"/>\n";
  const std::string tick_style = "font-family:sans-serif;font-size:11px;fill:#333";
  for (double t : ticks(xr)) {
    o += "<line x1=\"" + num(X(t)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(X(t)) + "\" y2=\"" + num(kTop + ph) +
         "\" style=\"stroke:#ddd;stroke-width:1\"/>\n";
    o += "<text x=\"" + num(X(t)) + "\" y=\"" + num(kTop + ph + 16) + "\" style=\"" + tick_style +
         ";text-anchor:middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ticks(yr)) {
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(Y(t)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(Y(t)) +
         "\" style=\"stroke:#ddd;stroke-width:1\"/>\n";
    o += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(Y(t) + 4) + "\" style=\"" + tick_style +
         ";text-anchor:end\">" + tick_label(t) + "</text>\n";
  }
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 18) +
       "\" style=\"font-family:sans-serif;font-size:13px;text-anchor:middle\">lambda (log10 axis)</text>\n";
  o += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" transform=\"rotate(-90 18 " + num(kTop + ph / 2) +
       ")\" style=\"font-family:sans-serif;font-size:13px;text-anchor:middle\">value (log10 axis)</text>\n";

  double legend_y = kTop + 8;
  const double legend_x = kLeft + pw + 14;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    double cx = 0, cy = 0;
    for (const auto& p : s.points) {
      const double lx = std::log10(p.lambda), ly = std::log10(p.value);
      cx += lx;
      cy += ly;
      o += "<circle cx=\"" + num(X(lx)) + "\" cy=\"" + num(Y(ly)) + "\" r=\"3.5\" style=\"fill:" + color +
           ";stroke:none\"/>\n";
    }
    cx /= static_cast<double>(s.points.size());
    cy /= static_cast<double>(s.points.size());
    o += "<text x=\"" + num(legend_x) + "\" y=\"" + num(legend_y) + "\" style=\"font-family:sans-serif;font-size:11px;fill:" +
         color + "\">" + escape(s.label) + "</text>\n";
    legend_y += 14;
    if (s.fit) {
      // The fit is in natural logs; slopes are base independent, intercepts are not.
      const double y0 = (s.fit->intercept + s.fit->slope * std::log(10.0) * cx) / std::log(10.0);
      o += line(s.fit->slope, cx, y0, "stroke:" + color + ";stroke-width:1.5");
      o += "<text x=\"" + num(legend_x + 10) + "\" y=\"" + num(legend_y) +
           "\" style=\"font-family:sans-serif;font-size:11px;fill:#333\">fit slope " + num(s.fit->slope, "%.3f") +
           "</text>\n";
      legend_y += 14;
    }
    if (s.reference) {
      o += line(*s.reference, cx, cy, "stroke:" + color + ";stroke-width:1;stroke-dasharray:5,4");
      o += "<text x=\"" + num(legend_x + 10) + "\" y=\"" + num(legend_y) +
           "\" style=\"font-family:sans-serif;font-size:11px;fill:#333\">reference slope " +
           num(*s.reference, "%.3f") + "</text>\n";
      legend_y += 14;
    }
    legend_y += 4;
  }
  o += "</svg>\n";
  return o;
}

std::vector<PlotFile> plot_table(const SweepTable& table) {
  struct Key {
    std::string functional, parameter;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<std::pair<std::string, std::string>>> order;  // (sweep, family) in first-seen order
  std::map<Key, std::map<std::pair<std::string, std::string>, std::vector<FitPoint>>> data;
  for (const auto& r : table) {
    if (!(r.value > 0.0) || !std::isfinite(r.value) || !(r.lambda > 0.0)) continue;
    const Key key{r.functional, r.parameter};
    const auto id = std::make_pair(r.sweep, r.family);
    auto& pts = data[key][id];
    if (pts.empty()) order[key].push_back(id);
    pts.push_back({r.lambda, r.value});
  }
  std::vector<PlotFile> files;
  for (const auto& [key, ids] : order) {
    std::vector<PlotSeries> series;
    for (const auto& id : ids) {
      PlotSeries s;
      s.label = id.first.empty() ? id.second : id.first + ": " + id.second;
      s.points = data[key][id];
      std::sort(s.points.begin(), s.points.end(), [](const FitPoint& a, const FitPoint& b) { return a.lambda < b.lambda; });
      try {
        s.fit = fit_exponent(s.points);
      } catch (const Error&) {
        // Too few or repeated lambdas: scatter only.
      }
      try {
        const std::string fam = id.second.substr(0, id.second.find('/'));
        s.reference = reference_exponent(parse_family(fam), key.functional, key.parameter);
      } catch (const Error&) {
      }
      series.push_back(std::move(s));
    }
    const std::string title = key.functional + (key.parameter.empty() ? "" : " (" + key.parameter + ")");
    files.push_back({sanitize(key.functional + "_" + key.parameter) + ".svg", svg_loglog(title, series)});
  }
  return files;
}

}  // namespace eigenlab
