#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "aic/harness/metrics.hpp"
#include "aic/harness/scenario.hpp"

namespace aic::harness {

/// Distribution snapshot of a per-row signal, enough to draw one violin.
struct Quantiles {
  double mean = 0.0;
  double p05 = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  std::size_t samples = 0;
};

struct TrialResult {
  unsigned seed = 0;
  bool fault = false;
  std::string fault_message;
  Summary summary;
  /// Tool position error perpendicular to the tool axis (W frame, meters),
  /// collected while the tool is near the surface.
  Quantiles lateral_tool_error;
};

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;
};

struct Aggregate {
  std::size_t trials = 0;
  std::size_t clean = 0;
  std::size_t faults = 0;
  /// Mean / sample standard deviation per metric over the clean trials.
  std::map<std::string, AggregateStat> stats;
};

struct BatchResult {
  std::vector<TrialResult> trials;  // ordered by seed
  Aggregate aggregate;
};

/// Runs `cfg` once per seed `base_seed + i`, i in [0, seeds), fanned out over
/// `jobs` worker threads. Each run is internally single-threaded and writes
/// only its own slot, so the result is deterministic and ordered by seed
/// regardless of the job count. A run that faults (or throws) is recorded as
/// a faulted trial and excluded from the aggregate statistics.
BatchResult run_batch(const ScenarioConfig& cfg, unsigned base_seed,
                      std::size_t seeds, std::size_t jobs);

/// Perpendicular-to-tool-axis position error distribution over the rows where
/// the tool is within 5 cm of a perceived surface or in contact.
Quantiles lateral_tool_error(const RunLog& log,
                             const sim::RigidBodyParams& vehicle);

std::string batch_to_json_text(const BatchResult& result);
void save_batch_json(const BatchResult& result, const std::string& path);
void save_trials_csv(const BatchResult& result, const std::string& path);

}  // namespace aic::harness
