#pragma once

#include <vector>

#include "aic/types.hpp"

namespace aic::est {

/// One hover sample for COM calibration: the commanded force and torque that
/// balanced the vehicle, both in B.
struct ComSample {
  Vec3 force;
  Vec3 torque;
};

struct ComCalibration {
  Vec3 offset;
  /// Condition number of the normal-equation matrix; large values mean some
  /// direction was barely excited.
  double condition = 0.0;
  /// (X^T X)^-1, the unit-noise covariance shape of the estimate.
  Mat3 covariance_shape = Mat3::Zero();
};

/// Least-squares COM offset from hover balance: each sample contributes
/// p_com x f = tau, i.e. -hat(f) p_com = tau. Solved via the normal equations
/// on the stacked system. Throws if fewer than 3 samples are given or if the
/// normal matrix condition number exceeds 1e8; the error names the deficient
/// direction (eigenvector of the smallest eigenvalue).
ComCalibration com_calibrate(const std::vector<ComSample>& samples);

}  // namespace aic::est
