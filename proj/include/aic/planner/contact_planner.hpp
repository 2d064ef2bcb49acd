#pragma once

#include <vector>

#include "aic/planner/trajectory.hpp"
#include "aic/sim/rigid_body.hpp"
#include "aic/sim/surface.hpp"
#include "aic/types.hpp"

namespace aic::planner {

/// One interaction target: a point near a surface, how long to stay on it,
/// how hard to push, and how fast to ramp the push in and out.
struct ContactSpec {
  Vec3 target_W = Vec3::Zero();
  double dwell = 5.0;
  double force = 5.0;
  double ramp = 1.0;
};

/// Closest surface point to `target_W` across all surfaces. Throws when the
/// surface list is empty.
sim::SurfacePoint surface_contact_lookup(
    const std::vector<sim::ContactSurface>& surfaces, const Vec3& target_W);

/// Body pose that puts the tool tip on `point_W` with the tool axis pushing
/// along -normal_W. The lateral tool axes are fixed by gravity (y_T
/// horizontal), which leaves the pose unique; a normal parallel to gravity
/// has no such resolution and throws.
Pose contact_pose(const Vec3& point_W, const Vec3& normal_W,
                  const sim::RigidBodyParams& params);

struct PlanOptions {
  /// Duration of each free-space leg between contact poses [s].
  double transit_time = 4.0;
  /// Reference sampling period [s].
  double sample_dt = 0.01;
};

/// Straight-line, geodesic-attitude move from `a` to `b` over `duration`,
/// with fifth-order time scaling (rest-to-rest).
Trajectory plan_move(const Pose& a, const Pose& b, double duration,
                     double sample_dt);

/// Visits each contact in order: a smooth transit (fifth-order time scaling,
/// straight line, geodesic attitude) to the contact pose, then a dwell that
/// ramps the push force in, holds it, and ramps it out. Requires
/// 2 * ramp <= dwell for every contact.
Trajectory plan_contact_sequence(const Pose& start_WB,
                                 const std::vector<ContactSpec>& contacts,
                                 const std::vector<sim::ContactSurface>& surfaces,
                                 const sim::RigidBodyParams& params,
                                 const PlanOptions& options);

/// Stationary push with a stepped magnitude profile: hold `pose_WB` and exert
/// force along `push_dir_W`, moving between consecutive `levels` with
/// half-cosine transitions of length `transition` at the start of each level
/// window of length `level_time`. The profile starts from zero force.
Trajectory plan_force_profile(const Pose& pose_WB, const Vec3& push_dir_W,
                              const std::vector<double>& levels,
                              double level_time, double transition,
                              double sample_dt);

struct SlideOptions {
  /// Mean tool speed along the path [m/s].
  double speed = 0.1;
  /// Push magnitude while sliding [N].
  double force = 3.0;
  /// Half-cosine force ramp at both ends of the slide [s].
  double ramp = 1.0;
  double sample_dt = 0.01;
};

/// Sliding interaction: waypoints are projected onto the nearest surface,
/// joined by a Catmull-Rom spline, re-projected, and traversed with
/// fifth-order time scaling while pushing along the local inward normal.
/// Velocities come from central differences of the sampled poses.
Trajectory plan_slide(const std::vector<Vec3>& waypoints_W,
                      const std::vector<sim::ContactSurface>& surfaces,
                      const sim::RigidBodyParams& params,
                      const SlideOptions& options);

}  // namespace aic::planner
