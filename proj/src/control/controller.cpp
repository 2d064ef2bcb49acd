#include "aic/control/controller.hpp"

namespace aic::control {

ControlOutputs control_step(const sim::RigidBodyParams& params,
                            const ImpedanceConfig& icfg,
                            const ForceControlConfig& fcfg,
                            ControllerState& state, const ControlInputs& in,
                            const ControlReference& ref) {
  params.validate();
  icfg.validate();
  fcfg.validate();
  if (!(in.dt > 0.0))
    throw std::invalid_argument("control_step: dt must be positive");

  ControlOutputs out;

  const Rotation& r_WB = in.pose_WB.orientation;
  const Twist twist_W(r_WB * in.twist_B.linear, r_WB * in.twist_B.angular);
  out.telemetry.errors = tracking_errors(in.pose_WB, twist_W, ref.pose_WB,
                                         ref.twist_W);

  const VirtualInertia inertia =
      virtual_mass(in.surface_distance, icfg, params.tool_rotation);
  out.telemetry.mass_ramp = inertia.ramp;
  out.telemetry.tool_axis_mass = inertia.tool_axis_multiplier;

  // Confidence compares the tool position error against the commanded push
  // direction, both in W.
  const Vec3 tool_error_W = params.tool_pose(in.pose_WB).position -
                            params.tool_pose(ref.pose_WB).position;
  state.confidence = confidence(in.surface_distance, tool_error_W, ref.force_W,
                                state.confidence, icfg, fcfg);
  out.telemetry.confidence = state.confidence;

  // Losing the surface for long enough abandons the accumulated force error;
  // re-engagement starts from a clean integrator.
  if (in.surface_distance) {
    state.time_without_distance = 0.0;
  } else {
    state.time_without_distance += in.dt;
    if (state.time_without_distance > fcfg.contact_loss_reset) {
      state.force_integral.setZero();
    }
  }

  // Desired measurement is the reaction to the exerted reference force.
  const Rotation r_BW = r_WB.inverse();
  const Vec3 force_ref_meas_B = -(r_BW * ref.force_W);
  const Mat3 selection = selection_matrix(state.confidence, force_ref_meas_B);
  const Mat6 selection6 = selection_matrix6(selection);

  const DirectForceResult direct =
      direct_force_command(in.contact_force_B, force_ref_meas_B, selection,
                           state.confidence, state.force_integral, fcfg,
                           params.mass, in.dt);
  state.force_integral = direct.integral;
  out.telemetry.force_error_B = in.contact_force_B - force_ref_meas_B;
  out.telemetry.force_integral = state.force_integral;
  out.telemetry.direct_B = direct.command;

  out.telemetry.impedance_B = impedance_command(
      out.telemetry.errors, in.external_B, inertia, selection6, icfg);

  const Vec6 coriolis_term =
      sim::coriolis_matrix(params, in.twist_B) * in.twist_B.stacked();
  const Wrench gravity_term = -sim::gravity_wrench(params, r_WB);

  out.command_B =
      unified_command(direct.command, out.telemetry.impedance_B, coriolis_term,
                      gravity_term, params.com_offset);
  return out;
}

}  // namespace aic::control
