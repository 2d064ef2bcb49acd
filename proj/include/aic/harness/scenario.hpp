#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "aic/control/config.hpp"
#include "aic/est/force_sensor.hpp"
#include "aic/harness/run_log.hpp"
#include "aic/perception/camera.hpp"
#include "aic/planner/contact_planner.hpp"
#include "aic/planner/trajectory.hpp"
#include "aic/sim/disturbance.hpp"
#include "aic/sim/plant.hpp"

namespace aic::harness {

/// Loop rates. The physics step must subdivide the control step exactly; the
/// camera is latched at the nearest physics step.
struct RateConfig {
  double physics_hz = 1000.0;
  double control_hz = 200.0;
  double camera_hz = 30.0;
};

/// How the reference trajectory is produced.
struct HoldSpec {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World,
                      Frame::Body);
  double duration = 10.0;
};
struct CsvSpec {
  std::string path;
};
struct ContactSequenceSpec {
  /// Transit start; when unset the scenario's initial pose is used.
  std::optional<Pose> start_WB;
  std::vector<planner::ContactSpec> contacts;
  planner::PlanOptions options;
};
struct ForceProfileSpec {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World,
                      Frame::Body);
  Vec3 push_dir_W = Vec3::UnitX();
  std::vector<double> levels;
  double level_time = 8.0;
  double transition = 0.5;
  double sample_dt = 0.01;
};
struct SlideSpec {
  std::vector<Vec3> waypoints_W;
  planner::SlideOptions options;
};
using TrajectorySpec = std::variant<HoldSpec, CsvSpec, ContactSequenceSpec,
                                    ForceProfileSpec, SlideSpec>;

struct InitialState {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World,
                      Frame::Body);
  Twist twist_B;
};

/// Everything a closed-loop run needs. A fixed seed makes the run
/// deterministic; the JSON round trip rejects unknown keys.
struct ScenarioConfig {
  std::string name = "scenario";
  double duration = 10.0;
  unsigned seed = 1;
  RateConfig rates;
  sim::RigidBodyParams vehicle;
  sim::IntegratorConfig integrator;
  control::ImpedanceConfig impedance;
  control::ForceControlConfig force;
  /// Uniform diagonal observer gain (per-axis estimate bandwidth) [1/s].
  double observer_gain = 3.0;
  est::ForceSensorConfig sensor;
  perception::CameraModel camera;
  bool camera_enabled = true;
  InitialState initial;
  std::vector<sim::ContactSurface> surfaces;
  std::vector<sim::DisturbanceEvent> disturbances;
  TrajectorySpec trajectory = HoldSpec{};

  void validate() const;
};

ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json_text(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a hash of the canonical JSON form, recorded in logs and sidecars.
std::uint64_t config_hash(const ScenarioConfig& cfg);

/// Materializes the reference the spec describes (planning is offline).
planner::Trajectory build_trajectory(const ScenarioConfig& cfg);

/// Runs the closed loop: physics at rates.physics_hz; sensing, estimation and
/// control at rates.control_hz; perception latched at rates.camera_hz. A
/// simulation fault ends the run early with the partial log and the fault
/// recorded.
RunLog run_scenario(const ScenarioConfig& cfg);

/// Same loop with an explicit reference, for composite plans the JSON
/// trajectory block cannot express. `cfg.trajectory` is ignored.
RunLog run_scenario(const ScenarioConfig& cfg,
                    const planner::Trajectory& trajectory);

}  // namespace aic::harness
