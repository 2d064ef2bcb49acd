#include "aic/sim/plant.hpp"

#include <cmath>

namespace aic::sim {
namespace {

struct Derivative {
  Vec3 position_dot_W;
  Eigen::Vector4d quat_dot;  // (w, x, y, z)
  Vec3 linear_acc_B;         // of the body origin, in B
  Vec3 angular_acc_B;
};

struct Externals {
  Vec3 contact_force_B = Vec3::Zero();
  std::vector<ActiveDisturbance> disturbances;
  Vec3 tip_force_W = Vec3::Zero();
  bool in_contact = false;
};

Externals evaluate_externals(const RigidBodyParams& params, const Pose& pose_WB,
                             const Twist& twist_B,
                             const std::vector<ContactSurface>& surfaces,
                             const DisturbanceProfile& disturbances, double t) {
  Externals ext;
  const Pose pose_WT = params.tool_pose(pose_WB);
  const Vec3 tip_vel_W = params.tool_velocity_W(pose_WB, twist_B);
  const ContactWrench cw = contact_wrench(surfaces, pose_WT, tip_vel_W);
  ext.tip_force_W = cw.tip_force_W;
  ext.in_contact = cw.in_contact;
  ext.contact_force_B = pose_WB.orientation.inverse() * cw.tip_force_W;
  ext.disturbances = disturbances.sample(t);
  return ext;
}

/// External wrench about the body origin in B, for bookkeeping and the
/// simulated momentum observer's ground truth.
Wrench external_about_origin(const RigidBodyParams& params, const Pose& pose_WB,
                             const Externals& ext) {
  const Mat3 r_BW = pose_WB.orientation.inverse().matrix();
  Wrench w(ext.contact_force_B, params.tool_offset.cross(ext.contact_force_B));
  for (const auto& d : ext.disturbances) {
    const Vec3 f_B = r_BW * d.force_W;
    const Vec3 t_B = r_BW * d.torque_W;
    w.force += f_B;
    w.torque += d.point_B.cross(f_B) + t_B;
  }
  return w;
}

Derivative dynamics(const RigidBodyParams& params, const Pose& pose_WB,
                    const Twist& twist_B, const Wrench& actuation_B,
                    const Externals& ext) {
  const Vec3 r = params.com_offset;
  const Vec3& w = twist_B.angular;
  const Mat3 r_BW = pose_WB.orientation.inverse().matrix();

  const Vec3 f_gravity_B = params.mass * (r_BW * Vec3(0, 0, -params.gravity));

  Vec3 f_total = actuation_B.force + f_gravity_B + ext.contact_force_B;
  Vec3 tau_com = actuation_B.torque - r.cross(actuation_B.force) +
                 (params.tool_offset - r).cross(ext.contact_force_B);
  for (const auto& d : ext.disturbances) {
    const Vec3 f_B = r_BW * d.force_W;
    f_total += f_B;
    tau_com += (d.point_B - r).cross(f_B) + r_BW * d.torque_W;
  }

  const Vec3 w_dot =
      params.inertia.ldlt().solve(tau_com - w.cross(params.inertia * w));
  const Vec3 v_com = twist_B.linear + w.cross(r);
  const Vec3 v_com_dot = f_total / params.mass - w.cross(v_com);
  const Vec3 v_origin_dot = v_com_dot - w_dot.cross(r);

  Derivative d;
  d.position_dot_W = pose_WB.orientation * twist_B.linear;
  const Quat& q = pose_WB.orientation.quaternion();
  const Quat wq(0.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
  const Quat qd = q * wq;
  d.quat_dot = Eigen::Vector4d(qd.w(), qd.x(), qd.y(), qd.z());
  d.linear_acc_B = v_origin_dot;
  d.angular_acc_B = w_dot;
  return d;
}

void check_finite(const SimState& s) {
  const bool ok = s.pose_WB.position.allFinite() &&
                  s.pose_WB.orientation.quaternion().coeffs().allFinite() &&
                  s.twist_B.linear.allFinite() && s.twist_B.angular.allFinite();
  const bool diverged = !ok || s.twist_B.linear.norm() > 1e6 ||
                        s.twist_B.angular.norm() > 1e6 ||
                        s.pose_WB.position.norm() > 1e9;
  if (diverged) {
    throw SimulationFault("plant state diverged at t=" + std::to_string(s.time) +
                          " (non-finite or unbounded state)");
  }
}

}  // namespace

StepResult Plant::step(const SimState& state, const Wrench& commanded_B,
                       const std::vector<ContactSurface>& surfaces,
                       const DisturbanceProfile& disturbances, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("Plant::step: dt must be positive and finite");
  }

  Vec6 u = commanded_B.stacked().cwiseMax(-config_.saturation)
               .cwiseMin(config_.saturation);
  if (config_.actuator_lag > 0.0) {
    if (!actuator_state_) actuator_state_ = Vec6::Zero();
    const double a = 1.0 - std::exp(-dt / config_.actuator_lag);
    *actuator_state_ += a * (u - *actuator_state_);
    u = *actuator_state_;
  }
  const Wrench actuation = Wrench::from_stacked(u);

  const Externals ext0 = evaluate_externals(params_, state.pose_WB,
                                            state.twist_B, surfaces,
                                            disturbances, state.time);

  StepResult out;
  out.applied_external_B = external_about_origin(params_, state.pose_WB, ext0);
  out.tip_force_W = ext0.tip_force_W;
  out.in_contact = ext0.in_contact;

  SimState next = state;
  if (config_.scheme == Integrator::SemiImplicitEuler) {
    const Derivative d =
        dynamics(params_, state.pose_WB, state.twist_B, actuation, ext0);
    next.twist_B.linear += dt * d.linear_acc_B;
    next.twist_B.angular += dt * d.angular_acc_B;
    // Pose advances with the updated velocities (symplectic pairing).
    next.pose_WB.position += dt * (state.pose_WB.orientation * next.twist_B.linear);
    next.pose_WB.orientation =
        state.pose_WB.orientation * exp_so3(dt * next.twist_B.angular);
  } else {
    struct Stage {
      Pose pose;
      Twist twist;
    };
    auto advance = [&](const Derivative& d, double h) {
      Stage s;
      s.pose = state.pose_WB;
      s.pose.position += h * d.position_dot_W;
      Eigen::Vector4d q(state.pose_WB.orientation.quaternion().w(),
                        state.pose_WB.orientation.quaternion().x(),
                        state.pose_WB.orientation.quaternion().y(),
                        state.pose_WB.orientation.quaternion().z());
      q += h * d.quat_dot;
      s.pose.orientation =
          Rotation::from_quaternion(Quat(q(0), q(1), q(2), q(3)));
      s.twist.linear = state.twist_B.linear + h * d.linear_acc_B;
      s.twist.angular = state.twist_B.angular + h * d.angular_acc_B;
      return s;
    };
    auto eval = [&](const Stage& s, double t) {
      const Externals e = evaluate_externals(params_, s.pose, s.twist, surfaces,
                                             disturbances, t);
      return dynamics(params_, s.pose, s.twist, actuation, e);
    };

    const Derivative k1 =
        dynamics(params_, state.pose_WB, state.twist_B, actuation, ext0);
    const Derivative k2 = eval(advance(k1, 0.5 * dt), state.time + 0.5 * dt);
    const Derivative k3 = eval(advance(k2, 0.5 * dt), state.time + 0.5 * dt);
    const Derivative k4 = eval(advance(k3, dt), state.time + dt);

    auto blend = [&](auto member) {
      // .eval() materializes the result before the member() temporaries the
      // expression references go out of scope.
      return ((member(k1) + 2.0 * member(k2) + 2.0 * member(k3) + member(k4)) /
              6.0)
          .eval();
    };
    next.pose_WB.position +=
        dt * blend([](const Derivative& d) { return d.position_dot_W; });
    Eigen::Vector4d q(state.pose_WB.orientation.quaternion().w(),
                      state.pose_WB.orientation.quaternion().x(),
                      state.pose_WB.orientation.quaternion().y(),
                      state.pose_WB.orientation.quaternion().z());
    q += dt * blend([](const Derivative& d) { return d.quat_dot; });
    next.pose_WB.orientation =
        Rotation::from_quaternion(Quat(q(0), q(1), q(2), q(3)));
    next.twist_B.linear +=
        dt * blend([](const Derivative& d) { return d.linear_acc_B; });
    next.twist_B.angular +=
        dt * blend([](const Derivative& d) { return d.angular_acc_B; });
  }

  next.time = state.time + dt;
  check_finite(next);
  out.state = next;
  return out;
}

double mechanical_energy(const RigidBodyParams& params, const SimState& state,
                         const std::vector<ContactSurface>& surfaces) {
  const Vec3 v_com =
      state.twist_B.linear + state.twist_B.angular.cross(params.com_offset);
  const Vec3& w = state.twist_B.angular;
  double e = 0.5 * params.mass * v_com.squaredNorm() +
             0.5 * w.dot(params.inertia * w);
  const Vec3 com_W = state.pose_WB.transform(params.com_offset);
  e += params.mass * params.gravity * com_W.z();
  const Pose tool = params.tool_pose(state.pose_WB);
  for (const auto& s : surfaces) {
    if (const auto hit = s.probe(tool.position)) {
      e += 0.5 * s.contact.stiffness * hit->depth * hit->depth;
    }
  }
  return e;
}

}  // namespace aic::sim
