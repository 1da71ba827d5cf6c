#include "dppo/harness/training.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"
#include "dppo/harness/evaluate.hpp"

namespace dppo::harness {
namespace fs = std::filesystem;

dist::TrainingSetup make_setup(const ExperimentConfig& c) {
  c.validate();
  dist::TrainingSetup s;
  s.ppo = c.ppo;
  auto probe = make_env(c);
  s.policy_spec = policy_spec(c, *probe);
  s.value_spec = value_spec(c, *probe);
  s.initial_log_std = c.network.initial_log_std;
  s.seed = c.seed;
  s.kernel.threads = c.kernel_threads;
  s.kernel.chunk_windows = c.chunk_windows;
  s.optimizer = c.optimizer;
  s.make_env = [c](std::uint32_t) { return make_env(c); };
  return s;
}

nn::Checkpoint training_checkpoint(const dist::Chief& chief, const ExperimentConfig& c) {
  nn::Checkpoint ck = chief.checkpoint();
  const std::string ini = to_ini(c);
  ck.put("config", std::vector<std::uint8_t>(ini.begin(), ini.end()));
  return ck;
}

std::string checkpoint_name(std::uint64_t iteration) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "checkpoint_%06llu.ckpt", static_cast<unsigned long long>(iteration));
  return buf;
}

TrainingOutcome run_training(const ExperimentConfig& c, const TrainingOptions& opt) {
  const dist::TrainingSetup setup = make_setup(c);
  dist::Chief chief(setup, c.workers, c.drop_slack, c.iterations);
  if (opt.resume) {
    nn::Checkpoint ck = nn::Checkpoint::load(*opt.resume);
    chief.restore(ck);
  }

  TrainingOutcome out;
  const fs::path dir(c.output_dir);
  std::optional<MetricsWriter> writer;
  if (opt.write_files) {
    fs::create_directories(dir);
    std::ofstream(dir / "config.ini") << to_ini(c);
    out.metrics_path = (dir / "metrics.csv").string();
    writer.emplace(out.metrics_path);
  }

  // Evaluation environments are built once; episodes use fixed seeds.
  std::unique_ptr<envs::Environment> eval_train, eval_easy, eval_hard;
  if (c.eval.every > 0) {
    eval_train = make_env(c);
    if (c.env.kind == EnvKind::kHopper) {
      eval_easy = make_hurdle_env(c, c.eval.easy_hurdle_height);
      eval_hard = make_hurdle_env(c, c.eval.hard_hurdle_height);
    }
  }
  EvalOptions eo{c.eval.episodes, c.eval.seed, c.eval.mean_action};
  policy::GaussianPolicy eval_pi(setup.policy_spec, setup.initial_log_std);

  auto save = [&](const nn::Checkpoint& ck, std::uint64_t done) {
    if (!opt.write_files) return std::string();
    const std::string path = (dir / checkpoint_name(done)).string();
    ck.save(path);
    return path;
  };

  nn::Checkpoint last = training_checkpoint(chief, c);
  auto t_iter = std::chrono::steady_clock::now();
  dist::RunOptions ro;
  ro.mode = c.driver;
  ro.timeout = c.timeout;
  ro.on_iteration = [&](const dist::IterationSummary& s, const dist::Chief& ch) {
    const auto now = std::chrono::steady_clock::now();
    MetricsRow row = make_row(s, std::chrono::duration<double>(now - t_iter).count());
    const std::uint64_t done = s.iteration + 1;
    if (c.eval.every > 0 && (done % c.eval.every == 0 || done == c.iterations)) {
      eval_pi.unflatten(ch.theta());
      row.eval_train = evaluate(eval_pi, ch.obs_stats(), *eval_train, eo).mean;
      if (eval_easy) row.eval_easy = evaluate(eval_pi, ch.obs_stats(), *eval_easy, eo).mean;
      if (eval_hard) row.eval_hard = evaluate(eval_pi, ch.obs_stats(), *eval_hard, eo).mean;
    }
    if (writer) writer->append(row);
    out.rows.push_back(row);
    if (opt.on_row) opt.on_row(row);
    last = training_checkpoint(ch, c);
    if (c.checkpoint_every > 0 && done % c.checkpoint_every == 0 && done != c.iterations) save(last, done);
    t_iter = std::chrono::steady_clock::now();
  };

  try {
    dist::RunResult r = dist::run_in_process(setup, chief, ro);
    out.summaries = std::move(r.iterations);
  } catch (const std::exception& e) {
    if (opt.write_files) {
      ByteReader st(last.get("state"));
      save(last, st.u64());
      std::ofstream(dir / "error.txt") << e.what() << "\n";
    }
    throw;
  }
  out.final_state = last;
  out.final_checkpoint = save(last, chief.open_round().iteration);
  if (opt.write_files) {
    std::error_code ec;
    fs::copy_file(out.final_checkpoint, dir / "final.ckpt", fs::copy_options::overwrite_existing, ec);
  }
  return out;
}

std::optional<TrainingOutcome> load_completed(const ExperimentConfig& c) {
  const fs::path dir(c.output_dir);
  const fs::path final_path = dir / "final.ckpt";
  const fs::path metrics_path = dir / "metrics.csv";
  if (!fs::exists(final_path) || !fs::exists(metrics_path)) return std::nullopt;
  TrainingOutcome out;
  try {
    out.final_state = nn::Checkpoint::load(final_path.string());
    if (!out.final_state.has("config")) return std::nullopt;
    const auto& cfg = out.final_state.get("config");
    if (std::string(cfg.begin(), cfg.end()) != to_ini(c)) return std::nullopt;
    ByteReader st(out.final_state.get("state"));
    if (st.u64() != c.iterations) return std::nullopt;
    std::ifstream in(metrics_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out.rows = parse_metrics(ss.str());
  } catch (const Error&) {
    return std::nullopt;
  }
  if (out.rows.size() != c.iterations) return std::nullopt;
  out.final_checkpoint = final_path.string();
  out.metrics_path = metrics_path.string();
  return out;
}

}  // namespace dppo::harness
