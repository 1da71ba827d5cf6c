// Command-line front end: train, evaluate, curriculum, robustness, plot,
// inspect-terrain. Exit codes: 0 success, 2 config error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dppo/errors.hpp"
#include "dppo/harness/config.hpp"
#include "dppo/harness/curriculum.hpp"
#include "dppo/harness/evaluate.hpp"
#include "dppo/harness/plots.hpp"
#include "dppo/harness/robustness.hpp"
#include "dppo/harness/training.hpp"
#include "dppo/terrain/course.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dppo;
using namespace dppo::harness;

namespace {

constexpr int kConfigExit = 2;
constexpr int kRuntimeExit = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
  bool deterministic = false;
  bool mean_action = false;
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
  auto* opt = app->add_option("--config", c.config, "experiment config (INI)");
  if (needs_config) opt->required();
  app->add_option("--seed", c.seed, "override experiment.seed");
  app->add_option("--workers", c.workers, "override distributed.workers");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--deterministic", c.deterministic, "single-threaded round-robin driver");
  app->add_flag("--mean-action", c.mean_action, "evaluate with the mean action");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) {
    cfg.workers = *c.workers;
    if (cfg.drop_slack >= cfg.workers) cfg.drop_slack = 0;
  }
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.deterministic) cfg.driver = dist::DriverMode::kDeterministic;
  if (c.mean_action) cfg.eval.mean_action = true;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw RuntimeFailure("cannot write " + p.string());
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::ordered_json stats_json(const EvalStats& s) {
  return {{"episodes", s.returns.size()}, {"mean", s.mean},     {"median", s.median},
          {"min", s.min},                 {"max", s.max},       {"mean_distance", s.mean_distance}};
}

int cmd_train(const Common& c, const std::string& resume) {
  const ExperimentConfig cfg = resolve(c);
  TrainingOptions opt;
  if (!resume.empty()) opt.resume = resume;
  opt.on_row = [](const MetricsRow& r) {
    std::printf("iter %6llu  return %10.3f  len %7.1f  kl %.5f  lambda %.4f  steps/s %.0f\n",
                static_cast<unsigned long long>(r.iteration), r.mean_return, r.mean_length, r.mean_kl, r.lambda,
                r.steps_per_second);
    std::fflush(stdout);
  };
  const TrainingOutcome out = run_training(cfg, opt);
  std::printf("final checkpoint %s\nmetrics %s\n", out.final_checkpoint.c_str(), out.metrics_path.c_str());
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& checkpoint, const std::string& course, std::size_t episodes) {
  PolicySnapshot snap = load_snapshot(checkpoint);
  ExperimentConfig cfg = snap.config;
  if (!c.config.empty()) cfg = load_config(c.config);
  std::unique_ptr<envs::Environment> env;
  if (course == "train") {
    env = make_env(cfg);
  } else if (course == "easy") {
    env = make_hurdle_env(cfg, cfg.eval.easy_hurdle_height);
  } else if (course == "hard") {
    env = make_hurdle_env(cfg, cfg.eval.hard_hurdle_height);
  } else if (course == "flat") {
    env = make_flat_env(cfg);
  } else {
    throw ConfigError("unknown course '" + course + "' (train, easy, hard, flat)");
  }
  if ((course == "easy" || course == "hard" || course == "flat") && cfg.env.kind != EnvKind::kHopper) {
    throw ConfigError("course '" + course + "' needs a hopper policy");
  }
  EvalOptions eo{episodes ? episodes : cfg.eval.episodes, c.seed.value_or(cfg.eval.seed),
                 c.mean_action || cfg.eval.mean_action};
  const EvalStats s = evaluate(snap, *env, eo);
  nlohmann::ordered_json j = stats_json(s);
  j["course"] = course;
  j["iteration"] = snap.iteration;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!c.out.empty()) write_file(fs::path(c.out) / "evaluation.json", text);
  return 0;
}

int cmd_curriculum(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  CurriculumOptions opt;
  opt.log = [](const std::string& s) {
    std::printf("%s\n", s.c_str());
    std::fflush(stdout);
  };
  const CurriculumReport r = curriculum_experiment(cfg, opt);
  std::printf("threshold hard %.3f easy %.3f\n", r.threshold_hard, r.threshold_easy);
  std::printf("median iterations to threshold, hard: stationary %.1f curriculum %.1f\n", r.median_stationary_hard,
              r.median_curriculum_hard);
  std::printf("median iterations to threshold, easy: stationary %.1f curriculum %.1f\n", r.median_stationary_easy,
              r.median_curriculum_easy);
  std::printf("report %s\n", (fs::path(cfg.output_dir) / "report.json").string().c_str());
  return 0;
}

int cmd_robustness(const Common& c, const std::vector<std::string>& hurdle, const std::vector<std::string>& flat,
                   std::size_t episodes) {
  std::vector<PolicySnapshot> h, f;
  for (const auto& p : hurdle) h.push_back(load_snapshot(p));
  for (const auto& p : flat) f.push_back(load_snapshot(p));
  if (h.empty() || f.empty()) throw ConfigError("need --hurdle and --flat checkpoints");
  const ExperimentConfig cfg = c.config.empty() ? h.front().config : load_config(c.config);
  EvalOptions eo{episodes ? episodes : cfg.robustness.episodes, c.seed.value_or(cfg.eval.seed),
                 c.mean_action || cfg.eval.mean_action};
  const RobustnessReport r = robustness_suite(h, f, cfg.robustness, eo);
  const std::string table = robustness_table(r);
  std::cout << table;
  std::printf("hurdle-trained >= flat-trained on %zu of %zu perturbed settings\n", r.hurdle_wins, r.perturbed);
  const fs::path out = c.out.empty() ? fs::path(cfg.output_dir) : fs::path(c.out);
  write_file(out / "robustness.csv", table);
  write_file(out / "robustness.svg", robustness_svg(r));
  return 0;
}

int cmd_plot(const Common& c, const std::string& metrics) {
  const auto plots = emit_plots(read_file(metrics));
  const fs::path out = c.out.empty() ? fs::path(metrics).parent_path() : fs::path(c.out);
  for (const auto& [name, svg] : plots) {
    write_file(out / (name + ".svg"), svg);
    std::printf("%s\n", (out / (name + ".svg")).string().c_str());
  }
  return 0;
}

int cmd_inspect(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const terrain::Course course = terrain::generate(cfg.env.course, cfg.seed);
  const fs::path out = c.out.empty() ? fs::path(".") : fs::path(c.out);
  const std::string stem = "course_seed" + std::to_string(cfg.seed);
  write_file(out / (stem + ".csv"), terrain::to_csv(course.field));
  write_file(out / (stem + ".svg"), terrain::to_svg(course.field));
  const auto bin = terrain::to_binary(course.field);
  write_file(out / (stem + ".bin"), std::string(bin.begin(), bin.end()));
  std::printf("%zu obstacles over %.1f m\n", course.obstacles.size(), course.field.length());
  for (const auto& o : course.obstacles) {
    std::printf("  %-9s x %7.2f width %5.2f height %5.2f difficulty %.3f\n", terrain::to_string(o.type).c_str(),
                o.x0, o.width, o.height, o.difficulty);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed PPO training and experiments"};
  app.require_subcommand(1);

  Common c;
  std::string resume, checkpoint, course = "train", metrics;
  std::vector<std::string> hurdle, flat;
  std::size_t episodes = 0;

  auto* train = app.add_subcommand("train", "run training");
  add_common(train, c, true);
  train->add_option("--resume", resume, "checkpoint to resume from");

  auto* eval = app.add_subcommand("evaluate", "evaluate a checkpoint");
  add_common(eval, c, false);
  eval->add_option("checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--course", course, "train, easy, hard or flat");
  eval->add_option("--episodes", episodes, "episode count (default from config)");

  auto* curr = app.add_subcommand("curriculum", "stationary vs curriculum hurdle comparison");
  add_common(curr, c, true);

  auto* rob = app.add_subcommand("robustness", "perturbation suite for hurdle- and flat-trained policies");
  add_common(rob, c, false);
  rob->add_option("--hurdle", hurdle, "hurdle-trained checkpoints")->required();
  rob->add_option("--flat", flat, "flat-trained checkpoints")->required();
  rob->add_option("--episodes", episodes, "episodes per setting (default from config)");

  auto* plot = app.add_subcommand("plot", "SVG learning curves from a metrics CSV");
  add_common(plot, c, false);
  plot->add_option("metrics", metrics, "metrics.csv")->required();

  auto* inspect = app.add_subcommand("inspect-terrain", "dump a generated course to CSV, SVG and binary");
  add_common(inspect, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    if (*train) return cmd_train(c, resume);
    if (*eval) return cmd_evaluate(c, checkpoint, course, episodes);
    if (*curr) return cmd_curriculum(c);
    if (*rob) return cmd_robustness(c, hurdle, flat, episodes);
    if (*plot) return cmd_plot(c, metrics);
    if (*inspect) return cmd_inspect(c);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeExit;
  }
  return 0;
}
