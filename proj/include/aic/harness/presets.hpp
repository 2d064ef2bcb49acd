#pragma once

#include <string>
#include <vector>

#include "aic/harness/run_log.hpp"
#include "aic/harness/scenario.hpp"

namespace aic::harness {

/// One evaluated pass/fail condition with the measured numbers spelled out.
struct CheckResult {
  std::string label;
  bool pass = false;
  std::string detail;
};

/// A named sub-run of a preset, kept so callers can dump the logs.
struct PresetRun {
  std::string name;
  RunLog log;
};

struct PresetReport {
  char id = '?';
  std::string title;
  std::vector<PresetRun> runs;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/// Canned closed-loop experiments with built-in checks. Each is deterministic
/// for a fixed `seed`.
///
///  A  quasi-static wall pushes at three virtual-mass settings plus an unseen
///     stick push; fits commanded stiffness and checks the closed-loop
///     stiffness law.
///  B  stepped force reference (5/10/20 N) against a stiff wall; checks
///     settling of the force error after each step.
///  C  reference-placement corner cases: setpoint behind the wall, well in
///     front of it, and far out of range; checks the confidence behavior.
///  D  push-and-slide along a curved path on a vertical wall at three push
///     levels; checks contact retention and tracking errors.
///  E  nine-point inspection row with long dwells; checks dwell force errors.
///  F  42 seeded contacts on an undulating sheet, rigid and springy mounts;
///     checks dwell force errors (rigid) and the oscillation the springy
///     mount provokes.
PresetReport run_stiffness_characterization(unsigned seed = 1);  // A
PresetReport run_force_step_tracking(unsigned seed = 1);         // B
PresetReport run_reference_corner_cases(unsigned seed = 1);      // C
PresetReport run_push_and_slide(unsigned seed = 1);              // D
PresetReport run_surface_inspection(unsigned seed = 1);          // E
PresetReport run_undulating_surface(unsigned seed = 1);          // F

const std::vector<char>& preset_ids();
std::string preset_title(char id);

/// Dispatch by preset id ('A'..'F', case-insensitive). Throws
/// std::invalid_argument for unknown ids.
PresetReport run_preset(char id, unsigned seed = 1);

}  // namespace aic::harness
