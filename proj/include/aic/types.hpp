#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <stdexcept>

namespace aic {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Quat = Eigen::Quaterniond;

/// Coordinate frames used throughout. W is the fixed inertial frame, B the
/// vehicle body frame, T the tool (end effector) frame with z along the
/// interaction axis, C the depth camera optical frame.
enum class Frame { World, Body, Tool, Camera };

constexpr const char* frame_name(Frame f) {
  switch (f) {
    case Frame::World: return "W";
    case Frame::Body: return "B";
    case Frame::Tool: return "T";
    case Frame::Camera: return "C";
  }
  return "?";
}

/// Proper rotation backed by a unit quaternion. Construction from a matrix
/// validates orthonormality (||R R^T - I|| < 1e-9) and det = +1; the
/// quaternion is renormalized on every composition so long products cannot
/// drift away from the group.
class Rotation {
 public:
  Rotation() : q_(Quat::Identity()) {}

  static Rotation identity() { return Rotation(); }

  static Rotation from_quaternion(const Quat& q) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("Rotation: quaternion has invalid norm");
    }
    Rotation r;
    r.q_ = q;
    r.q_.normalize();
    return r;
  }

  static Rotation from_matrix(const Mat3& m) {
    const double ortho = (m * m.transpose() - Mat3::Identity()).norm();
    if (!(ortho < 1e-9)) {
      throw std::invalid_argument("Rotation: matrix is not orthonormal");
    }
    if (m.determinant() < 0.0) {
      throw std::invalid_argument("Rotation: matrix is a reflection");
    }
    Rotation r;
    r.q_ = Quat(m).normalized();
    return r;
  }

  static Rotation from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0.0)) {
      throw std::invalid_argument("Rotation: zero axis");
    }
    return from_quaternion(Quat(Eigen::AngleAxisd(angle, axis / n)));
  }

  Mat3 matrix() const { return q_.toRotationMatrix(); }
  const Quat& quaternion() const { return q_; }

  Rotation inverse() const {
    Rotation r;
    r.q_ = q_.conjugate();
    return r;
  }

  Rotation operator*(const Rotation& o) const {
    Rotation r;
    r.q_ = (q_ * o.q_).normalized();
    return r;
  }

  Vec3 operator*(const Vec3& v) const { return q_ * v; }

 private:
  Quat q_;
};

/// Rigid transform from `child` coordinates into `parent` coordinates.
/// Composition requires the frame labels to chain: (A<-B) * (B<-C) = (A<-C).
struct Pose {
  Vec3 position = Vec3::Zero();
  Rotation orientation;
  Frame parent = Frame::World;
  Frame child = Frame::Body;

  Pose() = default;
  Pose(const Vec3& p, const Rotation& r, Frame parent_frame, Frame child_frame)
      : position(p), orientation(r), parent(parent_frame), child(child_frame) {}

  Pose operator*(const Pose& o) const {
    if (child != o.parent) {
      throw std::invalid_argument(std::string("Pose: cannot compose ") +
                                  frame_name(parent) + "<-" + frame_name(child) +
                                  " with " + frame_name(o.parent) + "<-" +
                                  frame_name(o.child));
    }
    return Pose(position + orientation * o.position, orientation * o.orientation,
                parent, o.child);
  }

  Pose inverse() const {
    const Rotation rinv = orientation.inverse();
    return Pose(-(rinv * position), rinv, child, parent);
  }

  /// Maps a point given in `child` coordinates into `parent` coordinates.
  Vec3 transform(const Vec3& p_child) const {
    return position + orientation * p_child;
  }
};

/// Linear/angular velocity pair. Stacking order is [linear; angular].
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  Twist() = default;
  Twist(const Vec3& v, const Vec3& w) : linear(v), angular(w) {}

  static Twist from_stacked(const Vec6& s) {
    return Twist(s.head<3>(), s.tail<3>());
  }
  Vec6 stacked() const {
    Vec6 s;
    s << linear, angular;
    return s;
  }
};

/// Force/torque pair. Stacking order is [force; torque].
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  Wrench() = default;
  Wrench(const Vec3& f, const Vec3& t) : force(f), torque(t) {}

  static Wrench from_stacked(const Vec6& s) {
    return Wrench(s.head<3>(), s.tail<3>());
  }
  Vec6 stacked() const {
    Vec6 s;
    s << force, torque;
    return s;
  }

  Wrench operator+(const Wrench& o) const {
    return Wrench(force + o.force, torque + o.torque);
  }
  Wrench operator-(const Wrench& o) const {
    return Wrench(force - o.force, torque - o.torque);
  }
  Wrench operator*(double a) const { return Wrench(force * a, torque * a); }
  Wrench operator-() const { return Wrench(-force, -torque); }
};

inline Wrench operator*(double a, const Wrench& w) { return w * a; }

/// Body-frame tracking errors: position, attitude, linear and angular
/// velocity. Pose and velocity errors stack to the 6-vectors consumed by the
/// impedance law.
struct ErrorVector {
  Vec3 position = Vec3::Zero();
  Vec3 attitude = Vec3::Zero();
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();

  Vec6 pose() const {
    Vec6 s;
    s << position, attitude;
    return s;
  }
  Vec6 velocity() const {
    Vec6 s;
    s << linear_velocity, angular_velocity;
    return s;
  }
};

}  // namespace aic
