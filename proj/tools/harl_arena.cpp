#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "arena/core/binary_io.hpp"
#include "arena/core/error.hpp"
#include "arena/curriculum/plan.hpp"
#include "arena/envs/trajectory.hpp"
#include "arena/harness/checkpoint.hpp"
#include "arena/harness/metrics.hpp"
#include "arena/harness/run_config.hpp"
#include "arena/harness/tournament.hpp"
#include "arena/harness/trainer.hpp"

namespace fs = std::filesystem;
using namespace arena;
using namespace arena::harness;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

bool print_progress(const MetricsRow& r) {
  std::string line = "update " + std::to_string(r.update) + " stage " + std::to_string(r.stage) + " episodes " +
                     std::to_string(r.episodes);
  for (std::size_t t = 0; t < r.teams.size(); ++t) line += " return" + std::to_string(t) + " " + fmt(r.teams[t].mean_return);
  if (r.reach_rate == r.reach_rate) line += " reach " + fmt(r.reach_rate);
  if (r.block_out_rate == r.block_out_rate) line += " block_out " + fmt(r.block_out_rate);
  if (r.win_rate_vs_initial == r.win_rate_vs_initial) line += " win_rate " + fmt(r.win_rate_vs_initial);
  if (!r.event.empty()) line += " [" + r.event + "]";
  std::cerr << line << "\n";
  return true;
}

void finish_run(Trainer& trainer, const std::string& out) {
  trainer.run(out, {print_progress});
  std::cout << "wrote " << out << "/metrics.csv (" << trainer.state().metrics.size() << " rows), "
            << trainer.state().evals.size() << " evaluations\n";
}

envs::Environment env_of(const RunConfig& cfg, int stage) {
  if (stage < 0 || static_cast<std::size_t>(stage) >= cfg.plan.stages.size()) {
    throw ConfigError("stage " + std::to_string(stage) + " is not part of the curriculum");
  }
  return envs::Environment(cfg.teams, cfg.plan.stages[static_cast<std::size_t>(stage)].env,
                           curriculum::make_layouts(cfg.plan, cfg.teams), stage);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-team HAPPO training arena"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ckpt_path, a_path, b_path, log_path, record_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> updates, stage;
  std::optional<std::size_t> n_instances;

  auto* train = app.add_subcommand("train", "Run the configured curriculum from scratch");
  train->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "Override the config seed");
  train->add_option("--out", out_dir, "Output directory (default: config output_dir)");
  train->add_option("--updates", updates, "Override the total update budget");

  auto* resume = app.add_subcommand("resume", "Continue training from a checkpoint");
  resume->add_option("--checkpoint", ckpt_path, "Checkpoint file")->required()->check(CLI::ExistingFile);
  resume->add_option("--out", out_dir, "Output directory (default: config output_dir)");
  resume->add_option("--updates", updates, "Override the total update budget");

  auto* eval = app.add_subcommand("eval", "Deterministic tournament between two checkpoints");
  eval->add_option("--a", a_path, "Checkpoint of side A")->required()->check(CLI::ExistingFile);
  eval->add_option("--b", b_path, "Checkpoint of side B")->required()->check(CLI::ExistingFile);
  eval->add_option("--n", n_instances, "Instances (default: config eval_instances)");
  eval->add_option("--seed", seed, "Spawn seed (default: config eval_seed)");
  eval->add_option("--out", out_dir, "Report path (default: eval_report.json next to --a)");
  eval->add_option("--record", record_path, "Also log instance 0 as a trajectory file");

  auto* replay = app.add_subcommand("replay", "Re-simulate a trajectory log into a CSV");
  replay->add_option("--log", log_path, "Trajectory log")->required()->check(CLI::ExistingFile);
  replay->add_option("--config", config_path, "Run config (default: the one embedded in the log)");
  replay->add_option("--checkpoint", ckpt_path, "Take the config from a checkpoint instead");
  replay->add_option("--out", out_dir, "CSV path (default: log path with .csv)");

  auto* plot = app.add_subcommand("export-plot", "Render SVG plots from metrics.csv and eval.csv");
  plot->add_option("--out", out_dir, "Directory holding the CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      RunConfig cfg = load_run_config(config_path);
      if (seed) cfg.seed = *seed;
      if (updates) cfg.train.total_updates = *updates;
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      Trainer trainer(cfg);
      finish_run(trainer, cfg.output_dir);
    } else if (*resume) {
      const Checkpoint ckpt = load_checkpoint(ckpt_path);
      RunConfig cfg = ckpt.config();
      if (updates) cfg.train.total_updates = *updates;
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      Trainer trainer(cfg, ckpt.state);
      if (trainer.finished()) throw ContractError("checkpoint run has already finished");
      finish_run(trainer, cfg.output_dir);
    } else if (*eval) {
      const Checkpoint a = load_checkpoint(a_path);
      const Checkpoint b = load_checkpoint(b_path);
      const RunConfig cfg = a.config();
      const auto env = env_of(cfg, a.state.stage);
      const std::size_t n = n_instances.value_or(cfg.train.eval_instances);
      const std::uint64_t s = seed.value_or(cfg.train.eval_seed);
      const auto report = run_tournament(a.state.learners, b.state.learners, env, n, s, fs::path(b_path).stem().string());
      const std::string out = out_dir.empty() ? (fs::path(a_path).parent_path() / "eval_report.json").string() : out_dir;
      write_file(out, report_to_json(report));
      std::cout << "vs " << report.opponent << ": wins " << report.wins << " losses " << report.losses << " ties "
                << report.ties << " of " << report.n_instances << ", win_rate " << fmt(report.win_rate) << " +- "
                << fmt(report.standard_error()) << "\n";
      if (!record_path.empty()) {
        auto log = record_match(mean_controller(a.state.learners), mean_controller(b.state.learners), env,
                                mix_seed(s, 0), 0, a.config_json);
        envs::save_trajectory(record_path, log);
        std::cout << "recorded " << log.steps.size() << " steps to " << record_path << "\n";
      }
    } else if (*replay) {
      const auto log = envs::load_trajectory(log_path);
      RunConfig cfg;
      if (!ckpt_path.empty()) {
        cfg = load_checkpoint(ckpt_path).config();
      } else if (!config_path.empty()) {
        cfg = load_run_config(config_path);
      } else {
        cfg = parse_run_config(log.header.context);
      }
      const auto env = env_of(cfg, log.header.stage);
      const std::string out = out_dir.empty() ? fs::path(log_path).replace_extension(".csv").string() : out_dir;
      write_file(out, envs::trajectory_csv(env, log));
      std::cout << "wrote " << out << " (" << log.steps.size() + 1 << " states)\n";
    } else if (*plot) {
      for (const auto& p : export_plots(out_dir)) std::cout << "wrote " << p << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
