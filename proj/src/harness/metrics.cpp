#include "dppo/harness/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dppo/errors.hpp"

namespace dppo::harness {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line, const std::string& col) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError("metrics line " + std::to_string(line) + ": column '" + col +
                      "' is not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s, std::size_t line, const std::string& col) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError("metrics line " + std::to_string(line) + ": column '" + col +
                      "' is not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = {
      "iteration", "mean_return", "median_return", "mean_length", "episodes",
      "mean_kl",   "lambda",      "early_stops",   "excluded",    "env_steps",
      "steps_per_second", "wall_seconds", "eval_train", "eval_easy", "eval_hard"};
  return cols;
}

std::string metrics_header() {
  std::string h;
  for (const auto& c : metrics_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

std::string format_row(const MetricsRow& r) {
  return std::to_string(r.iteration) + "," + num(r.mean_return) + "," + num(r.median_return) + "," +
         num(r.mean_length) + "," + std::to_string(r.episodes) + "," + num(r.mean_kl) + "," +
         num(r.lambda) + "," + std::to_string(r.early_stops) + "," + std::to_string(r.excluded) + "," +
         std::to_string(r.env_steps) + "," + num(r.steps_per_second) + "," + num(r.wall_seconds) + "," +
         opt(r.eval_train) + "," + opt(r.eval_easy) + "," + opt(r.eval_hard);
}

MetricsRow make_row(const dist::IterationSummary& s, double wall_seconds) {
  MetricsRow r;
  r.iteration = s.iteration;
  r.mean_return = s.mean_return();
  r.median_return = median(s.episode_returns);
  r.mean_length = s.episode_lengths.empty()
                      ? 0.0
                      : std::accumulate(s.episode_lengths.begin(), s.episode_lengths.end(), 0.0) /
                            static_cast<double>(s.episode_lengths.size());
  r.episodes = s.episode_returns.size();
  r.mean_kl = s.mean_kl;
  r.lambda = s.lambda;
  r.early_stops = s.early_stops;
  r.excluded = s.excluded;
  r.env_steps = s.env_steps;
  r.steps_per_second = s.collect_seconds > 0 ? static_cast<double>(s.env_steps) / s.collect_seconds : 0.0;
  r.wall_seconds = wall_seconds;
  return r;
}

std::vector<MetricsRow> parse_metrics(const std::string& csv) {
  std::vector<MetricsRow> rows;
  std::stringstream in(csv);
  std::string line;
  std::size_t n = 0;
  const auto& cols = metrics_columns();
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      if (line != metrics_header()) throw FormatError("metrics line 1: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    auto c = split_line(line);
    if (c.size() != cols.size()) {
      throw FormatError("metrics line " + std::to_string(n) + ": expected " +
                        std::to_string(cols.size()) + " columns, got " + std::to_string(c.size()));
    }
    MetricsRow r;
    r.iteration = to_u64(c[0], n, cols[0]);
    r.mean_return = to_double(c[1], n, cols[1]);
    r.median_return = to_double(c[2], n, cols[2]);
    r.mean_length = to_double(c[3], n, cols[3]);
    r.episodes = to_u64(c[4], n, cols[4]);
    r.mean_kl = to_double(c[5], n, cols[5]);
    r.lambda = to_double(c[6], n, cols[6]);
    r.early_stops = static_cast<std::uint32_t>(to_u64(c[7], n, cols[7]));
    r.excluded = to_u64(c[8], n, cols[8]);
    r.env_steps = to_u64(c[9], n, cols[9]);
    r.steps_per_second = to_double(c[10], n, cols[10]);
    r.wall_seconds = to_double(c[11], n, cols[11]);
    if (!c[12].empty()) r.eval_train = to_double(c[12], n, cols[12]);
    if (!c[13].empty()) r.eval_easy = to_double(c[13], n, cols[13]);
    if (!c[14].empty()) r.eval_hard = to_double(c[14], n, cols[14]);
    if (!rows.empty() && r.iteration <= rows.back().iteration) {
      throw FormatError("metrics line " + std::to_string(n) + ": iterations must increase");
    }
    rows.push_back(r);
  }
  return rows;
}

MetricsWriter::MetricsWriter(std::string path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (!text.empty()) {
      auto rows = parse_metrics(text);
      if (!rows.empty()) last_ = rows.back().iteration;
      return;
    }
  }
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write metrics file '" + path_ + "'");
  out << metrics_header() << "\n";
}

void MetricsWriter::append(const MetricsRow& r) {
  if (last_ && r.iteration <= *last_) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw RuntimeFailure("cannot append to metrics file '" + path_ + "'");
  out << format_row(r) << "\n";
  out.flush();
  last_ = r.iteration;
}

}  // namespace dppo::harness
