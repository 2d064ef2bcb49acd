#include "aic/control/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace aic::control {

double cosine_ramp(double x, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("cosine_ramp: lo must be < hi");
  if (x <= lo) return 1.0;
  if (x >= hi) return 0.0;
  return 0.5 * (1.0 + std::cos(M_PI * (x - lo) / (hi - lo)));
}

VirtualInertia virtual_mass(const std::optional<double>& distance,
                            const ImpedanceConfig& cfg, const Rotation& r_BT) {
  cfg.validate();
  VirtualInertia out;
  // Without a surface estimate the vehicle behaves as in free flight.
  out.ramp = distance ? cosine_ramp(*distance, cfg.d_min, cfg.d_max) : 0.0;
  out.tool_axis_multiplier =
      cfg.mass_free + out.ramp * (cfg.mass_wall - cfg.mass_free);

  Mat3 linear_T = Vec3(cfg.mass_free, cfg.mass_free, out.tool_axis_multiplier)
                      .asDiagonal();
  const Mat3 r = r_BT.matrix();
  const Mat3 linear_B = r * linear_T * r.transpose();

  out.normalized.setZero();
  out.normalized.topLeftCorner<3, 3>() = linear_B;
  // Isotropic rotational multiplier: invariant under the tool rotation.
  out.normalized.bottomRightCorner<3, 3>() =
      cfg.inertia_multiplier * Mat3::Identity();

  out.normalized_inverse.setZero();
  out.normalized_inverse.topLeftCorner<3, 3>() =
      r * Vec3(1.0 / cfg.mass_free, 1.0 / cfg.mass_free,
               1.0 / out.tool_axis_multiplier)
              .asDiagonal() *
      r.transpose();
  out.normalized_inverse.bottomRightCorner<3, 3>() =
      (1.0 / cfg.inertia_multiplier) * Mat3::Identity();
  return out;
}

double confidence(const std::optional<double>& distance, const Vec3& tool_error,
                  const Vec3& force_ref, double previous,
                  const ImpedanceConfig& icfg, const ForceControlConfig& fcfg) {
  const double f_norm = force_ref.norm();
  if (f_norm <= 0.0) return 0.0;

  const double lambda_d =
      distance ? cosine_ramp(*distance, icfg.d_min, icfg.d_max) : 0.0;
  // Position error projected onto the commanded push direction: drifting away
  // from where the force should be exerted erodes confidence.
  const double projected = tool_error.dot(force_ref) / f_norm;
  const double lambda_e = cosine_ramp(projected, fcfg.e_min, fcfg.e_max);

  const double blended =
      fcfg.blend * lambda_d * lambda_e + (1.0 - fcfg.blend) * previous;
  return std::min(1.0, std::max(0.0, blended));
}

Mat3 selection_matrix(double lambda, const Vec3& force_ref) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("selection_matrix: lambda outside [0, 1]");
  if (lambda == 0.0) return Mat3::Zero();
  const double f_norm = force_ref.norm();
  if (f_norm <= 0.0)
    throw std::invalid_argument(
        "selection_matrix: positive confidence requires a nonzero reference "
        "force");
  const Vec3 n = force_ref / f_norm;
  return lambda * n * n.transpose();
}

Mat6 selection_matrix6(const Mat3& selection) {
  Mat6 out = Mat6::Zero();
  out.topLeftCorner<3, 3>() = selection;
  return out;
}

DirectForceResult direct_force_command(const Vec3& f_meas_B, const Vec3& f_ref_B,
                                       const Mat3& selection, double lambda,
                                       const Vec3& integral,
                                       const ForceControlConfig& cfg,
                                       double mass, double dt) {
  cfg.validate();
  if (mass <= 0.0)
    throw std::invalid_argument("direct_force_command: mass must be positive");
  if (dt < 0.0)
    throw std::invalid_argument("direct_force_command: dt must be >= 0");

  DirectForceResult out;
  out.integral = integral;
  if (lambda <= 0.0) {
    out.command = Wrench{};
    return out;
  }

  const Vec3 error = f_meas_B - f_ref_B;
  const double scale = cfg.scale_by_inverse_mass ? 1.0 / mass : 1.0;
  out.command.force =
      scale * (selection * (-f_ref_B + cfg.kp * error + cfg.ki * integral));
  out.command.torque.setZero();

  // Integrate only with the loop engaged, so confidence transients can't wind
  // the term up before the selected axis actually carries the command.
  if (lambda > cfg.integral_gate) {
    out.integral += dt * error;
    out.integral = out.integral.cwiseMax(-cfg.integral_limit)
                       .cwiseMin(cfg.integral_limit);
  }
  return out;
}

Wrench impedance_command(const ErrorVector& errors, const Wrench& external_B,
                         const VirtualInertia& inertia, const Mat6& selection6,
                         const ImpedanceConfig& cfg) {
  cfg.validate();
  const Mat6 complement = Mat6::Identity() - selection6;
  const Vec6 shaped = complement *
                      ((inertia.normalized_inverse - Mat6::Identity()) *
                       external_B.stacked());
  const Vec6 pd = cfg.damping.asDiagonal() * errors.velocity() +
                  cfg.stiffness.asDiagonal() * errors.pose();
  return Wrench::from_stacked(shaped - pd);
}

Wrench unified_command(const Wrench& direct, const Wrench& impedance,
                       const Vec6& coriolis_term, const Wrench& gravity_term,
                       const Vec3& com_offset) {
  Wrench total = Wrench::from_stacked(direct.stacked() + impedance.stacked() +
                                      coriolis_term + gravity_term.stacked());
  // Thrust acts at the geometric center; offset mass turns commanded force
  // into a couple that must be countered about the COM.
  total.torque += com_offset.cross(total.force);
  return total;
}

}  // namespace aic::control
