#include "dppo/harness/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dppo/dist/learner.hpp"
#include "dppo/errors.hpp"
#include "dppo/harness/evaluate.hpp"
#include "dppo/harness/plots.hpp"
#include "dppo/harness/training.hpp"
#include "json.hpp"

namespace dppo::harness {
namespace fs = std::filesystem;

std::string to_string(Arm a) { return a == Arm::kCurriculum ? "curriculum" : "stationary"; }

ExperimentConfig arm_config(const ExperimentConfig& c, Arm arm, std::uint64_t seed) {
  ExperimentConfig a = c;
  a.seed = seed;
  a.env.course.type = terrain::TerrainType::kHurdles;
  a.env.mixture_types.clear();
  a.env.mixture_weights.clear();
  a.env.course.difficulty.curriculum = arm == Arm::kCurriculum;
  if (arm == Arm::kCurriculum) {
    a.env.course.difficulty.start = 0.0;
    a.env.course.difficulty.end = 1.0;
  }
  a.name = c.name + "_" + to_string(arm) + "_seed" + std::to_string(seed);
  a.output_dir = (fs::path(c.output_dir) / (to_string(arm) + "_seed" + std::to_string(seed))).string();
  return a;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

void score(CurriculumReport& r) {
  auto threshold = [&](auto initial, auto curve) {
    double base = 0.0, best = -INFINITY;
    for (const auto& run : r.runs) {
      base += initial(run);
      for (double v : curve(run)) best = std::max(best, v);
    }
    if (r.runs.empty()) return 0.0;
    base /= static_cast<double>(r.runs.size());
    if (!std::isfinite(best)) best = base;
    return base + r.threshold_fraction * (best - base);
  };
  r.threshold_easy = threshold([](const CurveRun& x) { return x.initial_easy; },
                               [](const CurveRun& x) { return x.easy; });
  r.threshold_hard = threshold([](const CurveRun& x) { return x.initial_hard; },
                               [](const CurveRun& x) { return x.hard; });
  auto first_crossing = [&](const CurveRun& run, const std::vector<double>& curve, double th) {
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (curve[k] >= th) return run.iterations[k];
    }
    return r.iterations + 1;
  };
  std::vector<double> se, ce, sh, ch;
  for (auto& run : r.runs) {
    run.to_threshold_easy = first_crossing(run, run.easy, r.threshold_easy);
    run.to_threshold_hard = first_crossing(run, run.hard, r.threshold_hard);
    const bool cur = run.arm == Arm::kCurriculum;
    (cur ? ce : se).push_back(static_cast<double>(run.to_threshold_easy));
    (cur ? ch : sh).push_back(static_cast<double>(run.to_threshold_hard));
  }
  r.median_stationary_easy = median(se);
  r.median_curriculum_easy = median(ce);
  r.median_stationary_hard = median(sh);
  r.median_curriculum_hard = median(ch);
}

CurriculumReport curriculum_experiment(const ExperimentConfig& c, const CurriculumOptions& opt) {
  c.validate();
  if (c.env.kind != EnvKind::kHopper) throw ConfigError("curriculum experiment needs env.kind = hopper");
  if (c.eval.every == 0) throw ConfigError("curriculum experiment needs eval.every > 0");
  if (c.curriculum.seeds.empty()) throw ConfigError("curriculum.seeds is empty");

  CurriculumReport rep;
  rep.iterations = c.iterations;
  rep.threshold_fraction = c.curriculum.threshold_fraction;
  const EvalOptions eo{c.eval.episodes, c.eval.seed, c.eval.mean_action};
  for (std::uint64_t seed : c.curriculum.seeds) {
    for (Arm arm : {Arm::kStationary, Arm::kCurriculum}) {
      const ExperimentConfig ac = arm_config(c, arm, seed);
      CurveRun run;
      run.arm = arm;
      run.seed = seed;

      // Both arms of a seed share the initial policy and all evaluation seeds.
      const dist::TrainingSetup setup = make_setup(ac);
      policy::GaussianPolicy pi(setup.policy_spec, setup.initial_log_std);
      pi.unflatten(dist::initial_model(setup).theta);
      const stats::RunningMoments empty(setup.policy_spec.encoder.input_dim());
      auto easy_env = make_hurdle_env(ac, c.eval.easy_hurdle_height);
      auto hard_env = make_hurdle_env(ac, c.eval.hard_hurdle_height);
      run.initial_easy = evaluate(pi, empty, *easy_env, eo).mean;
      run.initial_hard = evaluate(pi, empty, *hard_env, eo).mean;

      std::optional<TrainingOutcome> done;
      if (opt.write_files && opt.reuse_completed) done = load_completed(ac);
      TrainingOptions to;
      to.write_files = opt.write_files;
      if (opt.log) opt.log((done ? "reusing " : "training ") + ac.name);
      TrainingOutcome out = done ? std::move(*done) : run_training(ac, to);
      for (const MetricsRow& row : out.rows) {
        if (!row.eval_easy || !row.eval_hard) continue;
        run.iterations.push_back(row.iteration + 1);
        run.easy.push_back(*row.eval_easy);
        run.hard.push_back(*row.eval_hard);
      }
      run.final_state = std::move(out.final_state);
      rep.runs.push_back(std::move(run));
    }
  }
  score(rep);

  if (opt.write_files) {
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    std::ofstream(dir / "report.json") << report_json(rep);
    std::ofstream(dir / "curves.csv") << curves_csv(rep);
    std::ofstream(dir / "curves_easy.svg") << curves_svg(rep, false);
    std::ofstream(dir / "curves_hard.svg") << curves_svg(rep, true);
  }
  return rep;
}

std::string report_json(const CurriculumReport& r) {
  nlohmann::ordered_json j;
  j["iterations"] = r.iterations;
  j["threshold_fraction"] = r.threshold_fraction;
  j["threshold"] = {{"easy", r.threshold_easy}, {"hard", r.threshold_hard}};
  j["median_iterations_to_threshold"] = {
      {"easy", {{"stationary", r.median_stationary_easy}, {"curriculum", r.median_curriculum_easy}}},
      {"hard", {{"stationary", r.median_stationary_hard}, {"curriculum", r.median_curriculum_hard}}}};
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : r.runs) {
    nlohmann::ordered_json o;
    o["arm"] = to_string(run.arm);
    o["seed"] = run.seed;
    o["initial"] = {{"easy", run.initial_easy}, {"hard", run.initial_hard}};
    o["iterations_to_threshold"] = {{"easy", run.to_threshold_easy}, {"hard", run.to_threshold_hard}};
    o["iterations"] = run.iterations;
    o["easy"] = run.easy;
    o["hard"] = run.hard;
    j["runs"].push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string curves_csv(const CurriculumReport& r) {
  std::string out = "arm,seed,iteration,eval_easy,eval_hard\n";
  char buf[160];
  for (const auto& run : r.runs) {
    std::snprintf(buf, sizeof(buf), "%s,%llu,0,%.17g,%.17g\n", to_string(run.arm).c_str(),
                  static_cast<unsigned long long>(run.seed), run.initial_easy, run.initial_hard);
    out += buf;
    for (std::size_t k = 0; k < run.iterations.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%s,%llu,%llu,%.17g,%.17g\n", to_string(run.arm).c_str(),
                    static_cast<unsigned long long>(run.seed),
                    static_cast<unsigned long long>(run.iterations[k]), run.easy[k], run.hard[k]);
      out += buf;
    }
  }
  return out;
}

std::string curves_svg(const CurriculumReport& r, bool hard) {
  LineChart chart;
  chart.title = hard ? "Hard validation course" : "Easy validation course";
  chart.x_label = "iteration";
  chart.y_label = "mean evaluation return";
  for (const auto& run : r.runs) {
    Series s;
    s.name = to_string(run.arm) + " seed " + std::to_string(run.seed);
    for (std::size_t k = 0; k < run.iterations.size(); ++k) {
      s.x.push_back(static_cast<double>(run.iterations[k]));
      s.y.push_back(hard ? run.hard[k] : run.easy[k]);
    }
    chart.series.push_back(std::move(s));
  }
  return render_svg(chart);
}

}  // namespace dppo::harness
