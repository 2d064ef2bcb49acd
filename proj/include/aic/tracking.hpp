#pragma once

#include "aic/so3.hpp"
#include "aic/types.hpp"

namespace aic {

/// Body-frame tracking errors between an actual and a reference state, both
/// given in W. All four sub-errors come back expressed in B:
///
///   position error   e_p = R_BW (p - p_ref)
///   attitude error   e_R = 1/2 (R_ref^T R - R^T R_ref)^vee
///   velocity errors  e_v = R_BW (v - v_ref),  e_w = R_BW (w - w_ref)
///
/// e_R is zero iff the attitudes agree and flips sign when actual and
/// reference are swapped.
inline ErrorVector tracking_errors(const Pose& pose_WB, const Twist& twist_W,
                                   const Pose& ref_pose_WB,
                                   const Twist& ref_twist_W) {
  const Mat3 r = pose_WB.orientation.matrix();
  const Mat3 r_ref = ref_pose_WB.orientation.matrix();
  const Mat3 r_bw = r.transpose();

  ErrorVector e;
  e.position = r_bw * (pose_WB.position - ref_pose_WB.position);
  const Mat3 skew = 0.5 * (r_ref.transpose() * r - r.transpose() * r_ref);
  e.attitude = Vec3(skew(2, 1), skew(0, 2), skew(1, 0));
  e.linear_velocity = r_bw * (twist_W.linear - ref_twist_W.linear);
  e.angular_velocity = r_bw * (twist_W.angular - ref_twist_W.angular);
  return e;
}

}  // namespace aic
