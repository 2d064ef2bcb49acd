#include "aic/planner/contact_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aic/so3.hpp"

namespace aic::planner {
namespace {

// Fifth-order time scaling: s(0)=0, s(1)=1, zero velocity and acceleration
// at both ends.
double quintic(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double quintic_rate(double u) {
  return u * u * (30.0 + u * (-60.0 + 30.0 * u));
}

double half_cosine(double u) { return 0.5 * (1.0 - std::cos(M_PI * u)); }

// Sample instants 0, dt, 2dt, ..., T with the final instant pinned exactly.
std::vector<double> sample_times(double total, double dt) {
  std::vector<double> ts;
  const int n = std::max(1, static_cast<int>(std::ceil(total / dt - 1e-9)));
  ts.reserve(static_cast<size_t>(n) + 1);
  for (int k = 0; k < n; ++k) ts.push_back(k * dt);
  ts.push_back(total);
  return ts;
}

// Stationary dwell with a ramp-hold-ramp push profile along `push_dir_W`.
Trajectory plan_dwell(const Pose& pose, const Vec3& push_dir_W, double force,
                      double dwell, double ramp, double dt) {
  std::vector<TrajectorySetpoint> samples;
  for (double t : sample_times(dwell, dt)) {
    double mag = force;
    if (ramp > 0.0 && t < ramp) {
      mag = force * half_cosine(t / ramp);
    } else if (ramp > 0.0 && t > dwell - ramp) {
      mag = force * half_cosine((dwell - t) / ramp);
    }
    TrajectorySetpoint sp;
    sp.time = t;
    sp.position = pose.position;
    sp.orientation = pose.orientation;
    sp.force_W = mag * push_dir_W;
    samples.push_back(sp);
  }
  return Trajectory(std::move(samples));
}

}  // namespace

Trajectory plan_move(const Pose& a, const Pose& b, double duration,
                     double sample_dt) {
  if (!(duration > 0.0) || !(sample_dt > 0.0)) {
    throw std::invalid_argument("plan_move: duration and sample_dt must be positive");
  }
  const Vec3 dp = b.position - a.position;
  const Vec3 phi = log_so3(a.orientation.inverse() * b.orientation);
  std::vector<TrajectorySetpoint> samples;
  for (double t : sample_times(duration, sample_dt)) {
    const double u = t / duration;
    const double s = quintic(u);
    const double s_dot = quintic_rate(u) / duration;
    TrajectorySetpoint sp;
    sp.time = t;
    sp.position = a.position + s * dp;
    sp.velocity_W = s_dot * dp;
    sp.orientation = a.orientation * exp_so3(s * phi);
    sp.angular_velocity_W = sp.orientation * (s_dot * phi);
    samples.push_back(sp);
  }
  return Trajectory(std::move(samples));
}

sim::SurfacePoint surface_contact_lookup(
    const std::vector<sim::ContactSurface>& surfaces, const Vec3& target_W) {
  if (surfaces.empty()) {
    throw std::invalid_argument("surface_contact_lookup: no surfaces");
  }
  sim::SurfacePoint best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& surface : surfaces) {
    const sim::SurfacePoint sp = surface.closest_point(target_W);
    const double d = std::abs(sp.distance);
    if (d < best_distance) {
      best_distance = d;
      best = sp;
    }
  }
  return best;
}

Pose contact_pose(const Vec3& point_W, const Vec3& normal_W,
                  const sim::RigidBodyParams& params) {
  const double nn = normal_W.norm();
  if (!(nn > 0.0)) {
    throw std::invalid_argument("contact_pose: zero surface normal");
  }
  const Vec3 beta = -normal_W / nn;  // tool axis, into the surface
  const Vec3 down(0.0, 0.0, -1.0);
  Vec3 alpha = beta.cross(down);
  if (alpha.norm() < 1e-6) {
    throw std::invalid_argument(
        "contact_pose: surface normal is parallel to gravity, lateral "
        "attitude is unconstrained");
  }
  alpha.normalize();
  Mat3 r_WT;
  r_WT.col(0) = alpha.cross(beta);
  r_WT.col(1) = alpha;
  r_WT.col(2) = beta;
  const Rotation rot_WB =
      Rotation::from_matrix(r_WT) * params.tool_rotation.inverse();
  return Pose(point_W - rot_WB * params.tool_offset, rot_WB, Frame::World,
              Frame::Body);
}

Trajectory plan_contact_sequence(const Pose& start_WB,
                                 const std::vector<ContactSpec>& contacts,
                                 const std::vector<sim::ContactSurface>& surfaces,
                                 const sim::RigidBodyParams& params,
                                 const PlanOptions& options) {
  if (contacts.empty()) {
    throw std::invalid_argument("plan_contact_sequence: no contacts");
  }
  if (!(options.transit_time > 0.0) || !(options.sample_dt > 0.0)) {
    throw std::invalid_argument(
        "plan_contact_sequence: transit_time and sample_dt must be positive");
  }
  Trajectory plan;
  Pose here = start_WB;
  for (const auto& c : contacts) {
    if (!(c.dwell > 0.0) || c.force < 0.0 || c.ramp < 0.0 ||
        2.0 * c.ramp > c.dwell) {
      throw std::invalid_argument(
          "plan_contact_sequence: need dwell > 0 and 2 * ramp <= dwell");
    }
    const sim::SurfacePoint sp = surface_contact_lookup(surfaces, c.target_W);
    const Pose pose = contact_pose(sp.point_W, sp.normal_W, params);
    plan = plan.then(
        plan_move(here, pose, options.transit_time, options.sample_dt));
    plan = plan.then(plan_dwell(pose, -sp.normal_W, c.force, c.dwell, c.ramp,
                                options.sample_dt));
    here = pose;
  }
  return plan;
}

Trajectory plan_force_profile(const Pose& pose_WB, const Vec3& push_dir_W,
                              const std::vector<double>& levels,
                              double level_time, double transition,
                              double sample_dt) {
  if (levels.empty()) {
    throw std::invalid_argument("plan_force_profile: no levels");
  }
  for (double l : levels) {
    if (l < 0.0) throw std::invalid_argument("plan_force_profile: negative level");
  }
  if (!(level_time > 0.0) || !(sample_dt > 0.0) || transition < 0.0 ||
      transition > level_time) {
    throw std::invalid_argument(
        "plan_force_profile: need 0 <= transition <= level_time and positive "
        "times");
  }
  const double dn = push_dir_W.norm();
  if (!(dn > 0.0)) {
    throw std::invalid_argument("plan_force_profile: zero push direction");
  }
  const Vec3 dir = push_dir_W / dn;

  const double total = levels.size() * level_time;
  std::vector<TrajectorySetpoint> samples;
  for (double t : sample_times(total, sample_dt)) {
    const int k = std::min(static_cast<int>(t / level_time),
                           static_cast<int>(levels.size()) - 1);
    const double prev = k == 0 ? 0.0 : levels[k - 1];
    const double local = t - k * level_time;
    double mag = levels[k];
    if (transition > 0.0 && local < transition) {
      mag = prev + (levels[k] - prev) * half_cosine(local / transition);
    }
    TrajectorySetpoint sp;
    sp.time = t;
    sp.position = pose_WB.position;
    sp.orientation = pose_WB.orientation;
    sp.force_W = mag * dir;
    samples.push_back(sp);
  }
  return Trajectory(std::move(samples));
}

namespace {

Vec3 catmull_rom(const std::vector<Vec3>& q, int i, double u) {
  const Vec3& p0 = q[static_cast<size_t>(std::max(i - 1, 0))];
  const Vec3& p1 = q[static_cast<size_t>(i)];
  const Vec3& p2 = q[static_cast<size_t>(i + 1)];
  const Vec3& p3 = q[std::min(static_cast<size_t>(i) + 2, q.size() - 1)];
  const double u2 = u * u;
  const double u3 = u2 * u;
  return 0.5 * (2.0 * p1 + (p2 - p0) * u +
                (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u3);
}

}  // namespace

Trajectory plan_slide(const std::vector<Vec3>& waypoints_W,
                      const std::vector<sim::ContactSurface>& surfaces,
                      const sim::RigidBodyParams& params,
                      const SlideOptions& options) {
  if (waypoints_W.size() < 2) {
    throw std::invalid_argument("plan_slide: need at least two waypoints");
  }
  if (!(options.speed > 0.0) || !(options.sample_dt > 0.0) ||
      options.force < 0.0 || options.ramp < 0.0) {
    throw std::invalid_argument("plan_slide: invalid options");
  }

  std::vector<Vec3> on_surface;
  on_surface.reserve(waypoints_W.size());
  for (const auto& wp : waypoints_W) {
    on_surface.push_back(surface_contact_lookup(surfaces, wp).point_W);
  }

  // Arc-length table over the spline parameter.
  const int segments = static_cast<int>(on_surface.size()) - 1;
  constexpr int kSubdiv = 100;
  std::vector<double> param{0.0};
  std::vector<double> cumlen{0.0};
  Vec3 prev = on_surface.front();
  for (int i = 0; i < segments; ++i) {
    for (int j = 1; j <= kSubdiv; ++j) {
      const double u = static_cast<double>(j) / kSubdiv;
      const Vec3 p = catmull_rom(on_surface, i, u);
      param.push_back(i + u);
      cumlen.push_back(cumlen.back() + (p - prev).norm());
      prev = p;
    }
  }
  const double length = cumlen.back();
  if (!(length > 0.0)) {
    throw std::invalid_argument("plan_slide: degenerate path");
  }
  const double total = length / options.speed;
  if (2.0 * options.ramp > total) {
    throw std::invalid_argument(
        "plan_slide: force ramps do not fit in the slide duration");
  }

  const auto param_at_length = [&](double a) {
    const auto it = std::upper_bound(cumlen.begin(), cumlen.end(), a);
    if (it == cumlen.begin()) return param.front();
    if (it == cumlen.end()) return param.back();
    const size_t hi = static_cast<size_t>(it - cumlen.begin());
    const size_t lo = hi - 1;
    const double span = cumlen[hi] - cumlen[lo];
    const double w = span > 0.0 ? (a - cumlen[lo]) / span : 0.0;
    return param[lo] + w * (param[hi] - param[lo]);
  };

  // Pose at each sample instant: spline point re-projected to the surface,
  // attitude from the local normal.
  std::vector<TrajectorySetpoint> samples;
  for (double t : sample_times(total, options.sample_dt)) {
    const double sigma = param_at_length(quintic(t / total) * length);
    const int i = std::min(static_cast<int>(sigma), segments - 1);
    const Vec3 raw = catmull_rom(on_surface, i, sigma - i);
    const sim::SurfacePoint sp = surface_contact_lookup(surfaces, raw);
    const Pose pose = contact_pose(sp.point_W, sp.normal_W, params);

    double mag = options.force;
    if (options.ramp > 0.0 && t < options.ramp) {
      mag = options.force * half_cosine(t / options.ramp);
    } else if (options.ramp > 0.0 && t > total - options.ramp) {
      mag = options.force * half_cosine((total - t) / options.ramp);
    }

    TrajectorySetpoint s;
    s.time = t;
    s.position = pose.position;
    s.orientation = pose.orientation;
    s.force_W = -mag * sp.normal_W;
    samples.push_back(s);
  }

  // Central-difference velocities; the fifth-order profile pins both ends to
  // rest.
  for (size_t k = 1; k + 1 < samples.size(); ++k) {
    const double span = samples[k + 1].time - samples[k - 1].time;
    samples[k].velocity_W =
        (samples[k + 1].position - samples[k - 1].position) / span;
    const Vec3 phi = log_so3(samples[k - 1].orientation.inverse() *
                             samples[k + 1].orientation);
    samples[k].angular_velocity_W = samples[k].orientation * (phi / span);
  }
  return Trajectory(std::move(samples));
}

}  // namespace aic::planner
