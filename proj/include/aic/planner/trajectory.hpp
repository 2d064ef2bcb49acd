#pragma once

#include <string>
#include <vector>

#include "aic/types.hpp"

namespace aic::planner {

/// One sample of a time-parameterized reference: body pose in W, velocities
/// in W, and the force to exert on the environment in W.
struct TrajectorySetpoint {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  Rotation orientation;
  Vec3 velocity_W = Vec3::Zero();
  Vec3 angular_velocity_W = Vec3::Zero();
  Vec3 force_W = Vec3::Zero();
};

/// Immutable sampled reference. Queries between samples interpolate linearly
/// (geodesically for attitude); queries beyond either end clamp to the
/// nearest sample with velocities zeroed, so a finished trajectory holds its
/// final pose.
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws unless sample times are finite and strictly increasing.
  explicit Trajectory(std::vector<TrajectorySetpoint> samples);

  /// Single-sample trajectory that parks at a pose for `duration`.
  static Trajectory hold(const Pose& pose_WB, double duration);

  bool empty() const { return samples_.empty(); }
  double duration() const {
    return samples_.empty() ? 0.0 : samples_.back().time;
  }
  double start_time() const {
    return samples_.empty() ? 0.0 : samples_.front().time;
  }
  const std::vector<TrajectorySetpoint>& samples() const { return samples_; }

  TrajectorySetpoint at(double t) const;

  /// Plain-text round trip: one row per sample,
  /// t px py pz qw qx qy qz vx vy vz wx wy wz fx fy fz (17 columns).
  void save_csv(const std::string& path) const;
  static Trajectory load_csv(const std::string& path);

  /// Concatenation; `other` is shifted to start where this one ends.
  Trajectory then(const Trajectory& other) const;

 private:
  std::vector<TrajectorySetpoint> samples_;
};

}  // namespace aic::planner
