#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aic/sim/rigid_body.hpp"
#include "aic/types.hpp"

namespace aic::harness {

/// One control-tick record of a closed-loop run: vehicle state, reference,
/// perception output, controller telemetry, and the simulation truth the
/// controller never sees.
struct LogRow {
  double t = 0.0;

  // State (body pose in W, twist in B).
  Vec3 position = Vec3::Zero();
  Quat attitude = Quat::Identity();
  Vec3 velocity_B = Vec3::Zero();
  Vec3 angular_velocity_B = Vec3::Zero();

  // Reference.
  Vec3 ref_position = Vec3::Zero();
  Quat ref_attitude = Quat::Identity();
  Vec3 ref_force_W = Vec3::Zero();

  // Tool positions in W (actual and reference), so position metrics need no
  // knowledge of the vehicle geometry.
  Vec3 tool_position = Vec3::Zero();
  Vec3 ref_tool_position = Vec3::Zero();

  // Perception: perceived surface distance along the tool axis.
  std::optional<double> distance;

  // Controller telemetry.
  double confidence = 0.0;
  double mass_ramp = 0.0;
  double tool_axis_mass = 0.0;
  ErrorVector errors;
  Vec3 force_meas_B = Vec3::Zero();
  Vec3 force_ref_B = Vec3::Zero();
  Vec3 force_integral = Vec3::Zero();
  Wrench direct_B;
  Wrench impedance_B;
  Wrench command_B;
  Wrench external_estimate_B;

  // Truth.
  Wrench applied_external_B;
  Vec3 tip_force_W = Vec3::Zero();
  bool in_contact = false;
};

/// Complete log of one run. Rows are uniformly spaced at the control period.
/// CSV round-trips exactly (%.17g) so metrics computed from a reloaded log
/// match the in-memory values; a small JSON sidecar carries the metadata.
struct RunLog {
  std::string scenario = "scenario";
  unsigned seed = 0;
  double dt_control = 0.005;
  std::uint64_t config_hash = 0;
  bool fault = false;
  std::string fault_message;
  std::vector<LogRow> rows;

  double duration() const { return rows.empty() ? 0.0 : rows.back().t; }

  void save_csv(const std::string& path) const;
  /// Writes `<path>` as JSON metadata (scenario, seed, hash, fault record).
  void save_sidecar(const std::string& path) const;
  /// Reads a CSV written by save_csv; the header must match exactly.
  static RunLog load_csv(const std::string& path);
};

}  // namespace aic::harness
