#include "dppo/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dppo/harness/metrics.hpp"

namespace dppo::harness {
namespace {

constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char ch : s) {
    switch (ch) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += ch;
    }
  }
  return o;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); }
  double py(double y) const { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
}

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f(kW) + "\" height=\"" + f(kH) +
         "\" viewBox=\"0 0 " + f(kW) + " " + f(kH) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" + f(kW / 2 - kRight / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + esc(title) +
         "</text>\n";
}

std::string axes(const Frame& fr, const std::string& xl, const std::string& yl, bool x_ticks) {
  std::string s;
  const double xa = kLeft, xb = kW - kRight, ya = kTop, yb = kH - kBottom;
  s += "<line x1=\"" + f(xa) + "\" y1=\"" + f(yb) + "\" x2=\"" + f(xb) + "\" y2=\"" + f(yb) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + f(xa) + "\" y1=\"" + f(ya) + "\" x2=\"" + f(xa) + "\" y2=\"" + f(yb) +
       "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = fr.y0 + (fr.y1 - fr.y0) * i / 4.0;
    s += "<text x=\"" + f(xa - 6) + "\" y=\"" + f(fr.py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + f(yv) + "</text>\n";
    if (x_ticks) {
      const double xv = fr.x0 + (fr.x1 - fr.x0) * i / 4.0;
      s += "<text x=\"" + f(fr.px(xv)) + "\" y=\"" + f(yb + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + f(xv) + "</text>\n";
    }
  }
  s += "<text x=\"" + f((xa + xb) / 2) + "\" y=\"" + f(kH - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + esc(xl) + "</text>\n";
  s += "<text x=\"16\" y=\"" + f((ya + yb) / 2) + "\" transform=\"rotate(-90 16 " + f((ya + yb) / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + esc(yl) + "</text>\n";
  return s;
}

std::string legend(const std::vector<Series>& series) {
  std::string s;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(i);
    const char* col = kColors[i % 8];
    s += "<rect x=\"" + f(kW - kRight + 12) + "\" y=\"" + f(y - 8) + "\" width=\"12\" height=\"10\" fill=\"" +
         col + "\"/>\n";
    s += "<text x=\"" + f(kW - kRight + 30) + "\" y=\"" + f(y + 1) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + esc(series[i].name) + "</text>\n";
  }
  return s;
}

}  // namespace

std::string render_svg(const LineChart& c) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : c.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  widen(x0, x1);
  widen(y0, y1);
  const Frame fr{x0, x1, y0, y1};
  std::string svg = open_svg(c.title) + axes(fr, c.x_label, c.y_label, true);
  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& s = c.series[k];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += (pts.empty() ? "" : " ") + f(fr.px(s.x[i])) + "," + f(fr.py(s.y[i]));
    }
    svg += "<polyline class=\"series\" data-name=\"" + esc(s.name) + "\" fill=\"none\" stroke=\"" +
           kColors[k % 8] + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  svg += legend(c.series) + "</svg>\n";
  return svg;
}

std::string render_svg(const BarChart& c) {
  double y0 = 0.0, y1 = 0.0;
  for (const auto& s : c.series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  widen(y0, y1);
  const double n = std::max<double>(1.0, static_cast<double>(c.categories.size()));
  const Frame fr{0.0, n, y0, y1};
  std::string svg = open_svg(c.title) + axes(fr, "", c.y_label, false);
  const double slot = (kW - kLeft - kRight) / n;
  const double ns = std::max<double>(1.0, static_cast<double>(c.series.size()));
  const double bw = slot * 0.8 / ns;
  for (std::size_t j = 0; j < c.categories.size(); ++j) {
    const double cx = kLeft + slot * (static_cast<double>(j) + 0.5);
    svg += "<text x=\"" + f(cx) + "\" y=\"" + f(kH - kBottom + 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + esc(c.categories[j]) +
           "</text>\n";
    for (std::size_t k = 0; k < c.series.size(); ++k) {
      if (j >= c.series[k].y.size() || !std::isfinite(c.series[k].y[j])) continue;
      const double v = c.series[k].y[j];
      const double x = kLeft + slot * static_cast<double>(j) + slot * 0.1 + bw * static_cast<double>(k);
      const double top = fr.py(std::max(v, 0.0)), base = fr.py(std::min(v, 0.0));
      svg += "<rect class=\"bar\" x=\"" + f(x) + "\" y=\"" + f(top) + "\" width=\"" + f(bw) + "\" height=\"" +
             f(base - top) + "\" fill=\"" + kColors[k % 8] + "\"/>\n";
    }
  }
  svg += legend(c.series) + "</svg>\n";
  return svg;
}

std::map<std::string, std::string> emit_plots(const std::string& metrics_csv) {
  std::vector<MetricsRow> rows;
  if (!metrics_csv.empty()) rows = parse_metrics(metrics_csv);
  Series ret{"mean return", {}, {}}, kl{"mean KL", {}, {}}, lam{"lambda", {}, {}};
  for (const auto& r : rows) {
    const double x = static_cast<double>(r.iteration);
    ret.x.push_back(x);
    ret.y.push_back(r.mean_return);
    kl.x.push_back(x);
    kl.y.push_back(r.mean_kl);
    lam.x.push_back(x);
    lam.y.push_back(r.lambda);
  }
  std::map<std::string, std::string> out;
  out["return"] = render_svg(LineChart{"Return", "iteration", "mean episode return", {ret}});
  out["kl"] = render_svg(LineChart{"KL", "iteration", "mean KL", {kl}});
  out["lambda"] = render_svg(LineChart{"Penalty coefficient", "iteration", "lambda", {lam}});
  return out;
}

}  // namespace dppo::harness
