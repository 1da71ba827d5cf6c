#include "dppo/harness/robustness.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dppo/errors.hpp"
#include "dppo/harness/plots.hpp"

namespace dppo::harness {
namespace {

std::string label(const char* what, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %g", what, v);
  return buf;
}

double mean_return(const std::vector<PolicySnapshot>& group, const envs::Perturbation& p,
                   const EvalOptions& eo) {
  double s = 0.0;
  for (const auto& snap : group) {
    auto env = make_flat_env(snap.config, p);
    s += evaluate(snap, *env, eo).mean;
  }
  return s / static_cast<double>(group.size());
}

}  // namespace

std::vector<RobustnessSetting> robustness_grid(const RobustnessConfig& c) {
  std::vector<RobustnessSetting> out;
  out.push_back({"unperturbed", {}, true});
  const envs::Perturbation id;
  for (double v : c.friction) {
    if (v == id.friction) continue;
    envs::Perturbation p;
    p.friction = v;
    out.push_back({label("friction x", v), p, false});
  }
  for (double v : c.rubble) {
    if (v == id.rubble) continue;
    envs::Perturbation p;
    p.rubble = v;
    out.push_back({label("rubble", v), p, false});
  }
  for (double v : c.gain) {
    if (v == id.gain) continue;
    envs::Perturbation p;
    p.gain = v;
    out.push_back({label("actuator x", v), p, false});
  }
  for (double v : c.incline_deg) {
    if (v == 0.0) continue;
    envs::Perturbation p;
    p.incline = v * std::numbers::pi / 180.0;
    out.push_back({label("incline deg", v), p, false});
  }
  return out;
}

void normalize(RobustnessRow& row) {
  const double m = std::max(row.hurdle_return, row.flat_return);
  double d = m > 0.0 ? m : std::max(std::abs(row.hurdle_return), std::abs(row.flat_return));
  if (d == 0.0) d = 1.0;
  row.hurdle_normalized = row.hurdle_return / d;
  row.flat_normalized = row.flat_return / d;
}

RobustnessReport robustness_suite(const std::vector<PolicySnapshot>& hurdle,
                                  const std::vector<PolicySnapshot>& flat, const RobustnessConfig& grid,
                                  const EvalOptions& eo) {
  if (hurdle.empty() || flat.empty()) throw ConfigError("robustness suite needs policies in both groups");
  const auto dim = hurdle.front().policy.obs_dim();
  for (const auto* g : {&hurdle, &flat}) {
    for (const auto& s : *g) {
      if (s.config.env.kind != EnvKind::kHopper) throw ConfigError("robustness suite needs hopper policies");
      if (s.policy.obs_dim() != dim) throw ConfigError("policies use different bodies");
    }
  }
  RobustnessReport rep;
  for (const auto& setting : robustness_grid(grid)) {
    RobustnessRow row;
    row.setting = setting;
    row.hurdle_return = mean_return(hurdle, setting.perturbation, eo);
    row.flat_return = mean_return(flat, setting.perturbation, eo);
    normalize(row);
    if (!setting.identity) {
      ++rep.perturbed;
      if (row.hurdle_normalized >= row.flat_normalized) ++rep.hurdle_wins;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::string robustness_table(const RobustnessReport& r) {
  std::string out = "setting,friction,rubble,gain,incline_rad,hurdle_return,flat_return,hurdle_normalized,flat_normalized\n";
  char buf[320];
  for (const auto& row : r.rows) {
    const auto& p = row.setting.perturbation;
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  row.setting.name.c_str(), p.friction, p.rubble, p.gain, p.incline, row.hurdle_return,
                  row.flat_return, row.hurdle_normalized, row.flat_normalized);
    out += buf;
  }
  return out;
}

std::string robustness_svg(const RobustnessReport& r) {
  BarChart c;
  c.title = "Normalized return under unobserved perturbations";
  c.y_label = "normalized return";
  Series h{"hurdle-trained", {}, {}}, f{"flat-trained", {}, {}};
  for (const auto& row : r.rows) {
    c.categories.push_back(row.setting.name);
    h.y.push_back(row.hurdle_normalized);
    f.y.push_back(row.flat_normalized);
  }
  c.series = {h, f};
  return render_svg(c);
}

}  // namespace dppo::harness
