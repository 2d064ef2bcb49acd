#pragma once

#include "aic/so3.hpp"
#include "aic/types.hpp"

namespace aic::sim {

/// Physical vehicle parameters. `inertia` is taken about the center of mass
/// in body axes; `com_offset` is the body-origin-to-COM vector in B. The tool
/// frame T sits at `tool_offset` with attitude `tool_rotation` (z_T is the
/// interaction axis).
struct RigidBodyParams {
  double mass = 4.2;
  Mat3 inertia = (Eigen::Vector3d(0.08, 0.08, 0.14)).asDiagonal();
  Vec3 com_offset = Vec3::Zero();
  Vec3 tool_offset = Vec3(0.45, 0.0, 0.0);
  Rotation tool_rotation = Rotation::from_axis_angle(Vec3::UnitY(), M_PI / 2.0);
  double gravity = 9.81;

  void validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("RigidBodyParams: mass <= 0");
    if ((inertia - inertia.transpose()).norm() > 1e-12 ||
        inertia.determinant() <= 0.0) {
      throw std::invalid_argument("RigidBodyParams: inertia not SPD");
    }
    if (!(gravity >= 0.0)) {
      throw std::invalid_argument("RigidBodyParams: negative gravity constant");
    }
  }

  /// Pose of the tool frame in W for a given body pose.
  Pose tool_pose(const Pose& pose_WB) const {
    return pose_WB * Pose(tool_offset, tool_rotation, Frame::Body, Frame::Tool);
  }

  /// Velocity of the tool origin in W for a given body state.
  Vec3 tool_velocity_W(const Pose& pose_WB, const Twist& twist_B) const {
    return pose_WB.orientation *
           (twist_B.linear + twist_B.angular.cross(tool_offset));
  }
};

/// Simulator state: body pose in W and body twist expressed in B.
struct SimState {
  Pose pose_WB = Pose(Vec3::Zero(), Rotation::identity(), Frame::World, Frame::Body);
  Twist twist_B;
  double time = 0.0;
};

/// Generalized inertia of the simplified model: blockdiag(m I3, J). The COM
/// offset is deliberately not folded in; the controller compensates it
/// separately.
inline Mat6 mass_matrix(const RigidBodyParams& p) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = p.mass * Mat3::Identity();
  m.bottomRightCorner<3, 3>() = p.inertia;
  return m;
}

/// Velocity-product matrix of the body-frame model. The angular block is
/// -hat(J w): its product with w is w x (J w), the gyroscopic torque, so
/// torque-free tumbling conserves kinetic energy and momentum magnitude.
inline Mat6 coriolis_matrix(const RigidBodyParams& p, const Twist& twist_B) {
  Mat6 c = Mat6::Zero();
  c.topLeftCorner<3, 3>() = p.mass * hat(twist_B.angular);
  c.bottomRightCorner<3, 3>() = -hat(p.inertia * twist_B.angular);
  return c;
}

/// Physical gravity force on the vehicle expressed in B (zero torque about
/// the origin in the simplified model). At identity attitude this is
/// (0, 0, -m g). The plant adds it on the force side of the dynamics; the
/// controller's compensation term is its negative.
inline Wrench gravity_wrench(const RigidBodyParams& p, const Rotation& r_WB) {
  const Vec3 g_W(0.0, 0.0, -p.gravity);
  return Wrench(p.mass * (r_WB.inverse() * g_W), Vec3::Zero());
}

}  // namespace aic::sim
