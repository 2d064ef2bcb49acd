#pragma once

#include <optional>

#include "aic/control/config.hpp"
#include "aic/control/ops.hpp"
#include "aic/sim/rigid_body.hpp"
#include "aic/tracking.hpp"
#include "aic/types.hpp"

namespace aic::control {

/// Motion and interaction reference for one control step. `force_W` is the
/// force to exert on the environment; zero means pure motion tracking.
struct ControlReference {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World,
                      Frame::Body);
  Twist twist_W;
  Vec3 force_W = Vec3::Zero();
};

/// Measurements and estimates consumed by one control step. `external_B` is
/// the estimated external wrench about the body origin, `contact_force_B`
/// the filtered tool force measurement (reaction on the tool), and
/// `surface_distance` the perceived distance to the surface along the tool
/// axis (empty when perception has nothing to offer).
struct ControlInputs {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World,
                      Frame::Body);
  Twist twist_B;
  Wrench external_B;
  Vec3 contact_force_B = Vec3::Zero();
  std::optional<double> surface_distance;
  double dt = 0.005;
};

/// Intermediate quantities of a control step, logged by the harness.
struct ControlTelemetry {
  ErrorVector errors;
  double confidence = 0.0;
  double mass_ramp = 0.0;
  double tool_axis_mass = 0.0;
  Vec3 force_error_B = Vec3::Zero();
  Vec3 force_integral = Vec3::Zero();
  Wrench direct_B;
  Wrench impedance_B;
};

struct ControlOutputs {
  /// Commanded actuation wrench in B about the body origin.
  Wrench command_B;
  ControlTelemetry telemetry;
};

/// One pass of the interaction controller: tracking errors, virtual-inertia
/// schedule, confidence update, selected direct force, complementary
/// impedance, and the unified command with velocity-product, gravity and
/// COM-offset compensation. `state` carries the confidence, force integral
/// and contact-loss timer between calls.
ControlOutputs control_step(const sim::RigidBodyParams& params,
                            const ImpedanceConfig& icfg,
                            const ForceControlConfig& fcfg,
                            ControllerState& state, const ControlInputs& in,
                            const ControlReference& ref);

}  // namespace aic::control
