#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aic/harness/batch.hpp"
#include "aic/harness/metrics.hpp"
#include "aic/harness/presets.hpp"
#include "aic/harness/scenario.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace aic;

void apply_overrides(harness::ScenarioConfig& cfg, std::optional<unsigned> seed,
                     std::optional<double> dt_physics,
                     std::optional<double> dt_control) {
  if (seed) cfg.seed = *seed;
  if (dt_physics) {
    if (!(*dt_physics > 0.0)) throw CLI::ValidationError("--dt-physics must be > 0");
    cfg.rates.physics_hz = 1.0 / *dt_physics;
  }
  if (dt_control) {
    if (!(*dt_control > 0.0)) throw CLI::ValidationError("--dt-control must be > 0");
    cfg.rates.control_hz = 1.0 / *dt_control;
  }
}

std::string save_log(const harness::RunLog& log, const fs::path& out_dir,
                     const std::string& stem) {
  fs::create_directories(out_dir);
  const fs::path csv = out_dir / (stem + ".csv");
  log.save_csv(csv.string());
  log.save_sidecar((out_dir / (stem + ".json")).string());
  return csv.string();
}

nlohmann::json summary_json(const harness::Summary& s) {
  nlohmann::json j{
      {"rmse_body_x", s.rmse_body_x},   {"rmse_body_y", s.rmse_body_y},
      {"rmse_body_z", s.rmse_body_z},   {"rmse_tool_x", s.rmse_tool_x},
      {"rmse_tool_y", s.rmse_tool_y},   {"rmse_tool_z", s.rmse_tool_z},
      {"rmse_force", s.rmse_force},     {"contact_ratio", s.contact_ratio},
      {"rows", s.rows},                 {"pushing_rows", s.pushing_rows},
      {"fault", s.fault},
  };
  if (std::isfinite(s.contact_start)) j["contact_start"] = s.contact_start;
  return j;
}

int cmd_run(const std::string& config_path, const fs::path& out_dir,
            std::optional<unsigned> seed, std::optional<double> dt_physics,
            std::optional<double> dt_control) {
  harness::ScenarioConfig cfg = harness::load_config(config_path);
  apply_overrides(cfg, seed, dt_physics, dt_control);
  const harness::RunLog log = harness::run_scenario(cfg);
  const std::string csv = save_log(log, out_dir, cfg.name);
  std::printf("wrote %s (%zu rows)\n", csv.c_str(), log.rows.size());
  std::printf("%s\n", summary_json(harness::summarize(log)).dump(2).c_str());
  if (log.fault) {
    std::fprintf(stderr, "simulation fault: %s\n", log.fault_message.c_str());
    return 2;
  }
  return 0;
}

int cmd_preset(const std::string& id_text, const fs::path& out_dir,
               std::optional<unsigned> seed, bool check) {
  if (id_text.size() != 1) {
    throw CLI::ValidationError("preset id must be one letter A-F");
  }
  const harness::PresetReport rep =
      harness::run_preset(id_text[0], seed.value_or(1));
  std::printf("preset %c: %s\n", rep.id, rep.title.c_str());
  bool fault = false;
  for (const auto& run : rep.runs) {
    const std::string csv = save_log(run.log, out_dir, run.name);
    std::printf("  wrote %s (%zu rows)\n", csv.c_str(), run.log.rows.size());
    fault = fault || run.log.fault;
  }
  for (const auto& c : rep.checks) {
    std::printf("  [%s] %s — %s\n", c.pass ? "pass" : "FAIL", c.label.c_str(),
                c.detail.c_str());
  }
  if (fault) return 2;
  if (check && !rep.passed()) return 1;
  return 0;
}

int cmd_batch(const std::string& config_path, const fs::path& out_dir,
              unsigned seeds, unsigned jobs, std::optional<unsigned> seed,
              std::optional<double> dt_physics, std::optional<double> dt_control,
              bool check) {
  harness::ScenarioConfig cfg = harness::load_config(config_path);
  apply_overrides(cfg, std::nullopt, dt_physics, dt_control);
  const unsigned base = seed.value_or(cfg.seed);
  const harness::BatchResult result = harness::run_batch(cfg, base, seeds, jobs);
  fs::create_directories(out_dir);
  const fs::path trials = out_dir / (cfg.name + "_trials.csv");
  const fs::path agg = out_dir / (cfg.name + "_batch.json");
  harness::save_trials_csv(result, trials.string());
  harness::save_batch_json(result, agg.string());
  std::printf("wrote %s and %s\n", trials.string().c_str(), agg.string().c_str());
  std::printf("%zu trials, %zu clean, %zu faulted\n", result.aggregate.trials,
              result.aggregate.clean, result.aggregate.faults);
  for (const auto& [name, stat] : result.aggregate.stats) {
    std::printf("  %-24s mean %.6g  stddev %.6g\n", name.c_str(), stat.mean,
                stat.stddev);
  }
  if (result.aggregate.faults > 0) return 2;
  (void)check;
  return 0;
}

int cmd_metrics(const std::string& log_path) {
  const harness::RunLog log = harness::RunLog::load_csv(log_path);
  std::printf("%s\n", summary_json(harness::summarize(log)).dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale interaction-control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_id;
  std::string log_path;
  std::string out_dir = ".";
  std::optional<unsigned> seed;
  std::optional<double> dt_physics;
  std::optional<double> dt_control;
  unsigned seeds = 10;
  unsigned jobs = 1;
  bool check = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario config");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--dt-physics", dt_physics, "Physics step [s]");
  run->add_option("--dt-control", dt_control, "Control step [s]");

  CLI::App* preset = app.add_subcommand("preset", "Run a canned experiment");
  preset->add_option("id", preset_id, "Preset id (A-F)")->required();
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--seed", seed, "Preset seed");
  preset->add_flag("--check", check, "Exit nonzero when a built-in check fails");

  CLI::App* batch = app.add_subcommand("batch", "Run a config over many seeds");
  batch->add_option("config", config_path, "Scenario config (JSON)")->required();
  batch->add_option("--seeds", seeds, "Number of seeds");
  batch->add_option("--jobs", jobs, "Worker threads");
  batch->add_option("--out", out_dir, "Output directory");
  batch->add_option("--seed", seed, "Base seed (default: config seed)");
  batch->add_option("--dt-physics", dt_physics, "Physics step [s]");
  batch->add_option("--dt-control", dt_control, "Control step [s]");
  batch->add_flag("--check", check, "Exit nonzero when a trial faults");

  CLI::App* metrics = app.add_subcommand("metrics", "Summarize a run log");
  metrics->add_option("log", log_path, "Run log CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, seed, dt_physics, dt_control);
    }
    if (preset->parsed()) {
      return cmd_preset(preset_id, out_dir, seed, check);
    }
    if (batch->parsed()) {
      return cmd_batch(config_path, out_dir, seeds, jobs, seed, dt_physics,
                       dt_control, check);
    }
    if (metrics->parsed()) {
      return cmd_metrics(log_path);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
