#pragma once

#include <optional>

#include "aic/control/config.hpp"
#include "aic/types.hpp"

namespace aic::control {

/// Smooth 1 -> 0 transition: 1 for x <= lo, 0 for x > hi, half-cosine blend
/// in between. Shared by the virtual-mass schedule and both confidence ramps.
double cosine_ramp(double x, double lo, double hi);

/// Normalized virtual inertia (multipliers of the system inertia), diagonal
/// in the tool frame and conjugated into B by blockdiag(R_BT, R_BT). The
/// rotational block is isotropic, so it is rotation invariant.
struct VirtualInertia {
  Mat6 normalized = Mat6::Identity();
  Mat6 normalized_inverse = Mat6::Identity();
  /// Scheduled multiplier on the tool z axis.
  double tool_axis_multiplier = 0.0;
  double ramp = 0.0;
};

/// Schedules the tool-axis multiplier on the perceived surface distance:
/// mass_wall at/inside d_min, mass_free beyond d_max (and when no distance
/// estimate exists), half-cosine blend between.
VirtualInertia virtual_mass(const std::optional<double>& distance,
                            const ImpedanceConfig& cfg, const Rotation& r_BT);

/// Confidence recursion. `tool_error` is the tool position error and
/// `force_ref` the reference force to exert on the surface, both in the same
/// frame; the projected error uses the reference force direction. Returns 0
/// whenever no force is referenced, otherwise the blend-filtered product of
/// the distance and error ramps, clamped to [0, 1].
double confidence(const std::optional<double>& distance, const Vec3& tool_error,
                  const Vec3& force_ref, double previous,
                  const ImpedanceConfig& icfg, const ForceControlConfig& fcfg);

/// Rank-one selector lambda * n n^T of the force-controlled direction, with n
/// the unit reference force direction. Zero when lambda is 0; referencing
/// lambda > 0 with a zero force is a validation error.
Mat3 selection_matrix(double lambda, const Vec3& force_ref);

/// Embeds the force selector in the wrench space (no torque selection).
Mat6 selection_matrix6(const Mat3& selection);

struct DirectForceResult {
  Wrench command;
  Vec3 integral;
};

/// PI force law with feedforward on the selected axis:
///   f = s * Sel * (-f_ref + kp (f_meas - f_ref) + ki * integral)
/// with s = 1/mass when configured, 1 otherwise. `f_ref` is the desired
/// measured (reaction) force in B. The integral accumulates the force error
/// only while lambda exceeds the gate and is clamped per axis.
DirectForceResult direct_force_command(const Vec3& f_meas_B, const Vec3& f_ref_B,
                                       const Mat3& selection, double lambda,
                                       const Vec3& integral,
                                       const ForceControlConfig& cfg,
                                       double mass, double dt);

/// Axis-selective impedance wrench:
///   (I - Sel6) (Mv^-1 - I) tau_ext - D ev - K ep
/// with Mv the normalized virtual inertia in B. With identity virtual inertia
/// and no selection this is a pure PD on the tracking errors.
Wrench impedance_command(const ErrorVector& errors, const Wrench& external_B,
                         const VirtualInertia& inertia, const Mat6& selection6,
                         const ImpedanceConfig& cfg);

/// Sums the command contributions, then adds the COM-offset couple
/// [0; p_com x f] computed from the force part of the summed command.
Wrench unified_command(const Wrench& direct, const Wrench& impedance,
                       const Vec6& coriolis_term, const Wrench& gravity_term,
                       const Vec3& com_offset);

}  // namespace aic::control
