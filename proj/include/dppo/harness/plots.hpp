#ifndef DPPO_HARNESS_PLOTS_HPP_
#define DPPO_HARNESS_PLOTS_HPP_

#include <map>
#include <string>
#include <vector>

namespace dppo::harness {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<Series> series;  // y holds one value per category; x unused
};

// Deterministic SVG text; identical inputs give identical bytes. Empty
// charts render axes only.
std::string render_svg(const LineChart& c);
std::string render_svg(const BarChart& c);

// Return, KL and lambda curves of a metrics CSV, keyed by file stem
// ("return", "kl", "lambda"). Throws FormatError on a malformed CSV.
std::map<std::string, std::string> emit_plots(const std::string& metrics_csv);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_PLOTS_HPP_
