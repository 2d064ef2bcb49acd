#pragma once

#include "aic/types.hpp"

namespace aic {

/// Skew-symmetric matrix of v, so that hat(v) * w == v.cross(w).
inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  // clang-format off
  m <<     0.0, -v.z(),  v.y(),
         v.z(),    0.0, -v.x(),
        -v.y(),  v.x(),    0.0;
  // clang-format on
  return m;
}

/// Inverse of hat(). The input must be skew-symmetric: ||S + S^T|| < 1e-9.
inline Vec3 vee(const Mat3& s) {
  if (!((s + s.transpose()).norm() < 1e-9)) {
    throw std::invalid_argument("vee: matrix is not skew-symmetric");
  }
  return Vec3(s(2, 1), s(0, 2), s(1, 0));
}

/// Exponential map: rotation vector (axis * angle) to a rotation. Uses the
/// quaternion form, exact for all magnitudes, with the small-angle series
/// below 1e-8 rad.
inline Rotation exp_so3(const Vec3& phi) {
  const double angle = phi.norm();
  if (angle < 1e-8) {
    Quat q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    return Rotation::from_quaternion(q);
  }
  return Rotation::from_axis_angle(phi, angle);
}

/// Logarithm map: rotation to the rotation vector on the short branch
/// (angle in [0, pi]). Inverse of exp_so3 away from the pi boundary.
inline Vec3 log_so3(const Rotation& r) {
  Quat q = r.quaternion();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Vec3 v = q.vec();
  const double vn = v.norm();
  if (vn < 1e-12) return 2.0 * v;
  return (2.0 * std::atan2(vn, q.w()) / vn) * v;
}

}  // namespace aic
