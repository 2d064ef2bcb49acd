#include "aic/est/com_calibration.hpp"

#include <sstream>

#include "aic/so3.hpp"

namespace aic::est {

ComCalibration com_calibrate(const std::vector<ComSample>& samples) {
  if (samples.size() < 3) {
    throw std::invalid_argument("com_calibrate: need at least 3 samples");
  }
  Mat3 xtx = Mat3::Zero();
  Vec3 xty = Vec3::Zero();
  for (const auto& s : samples) {
    const Mat3 x = -hat(s.force);
    xtx += x.transpose() * x;
    xty += x.transpose() * s.torque;
  }

  const Eigen::SelfAdjointEigenSolver<Mat3> eig(xtx);
  const Vec3 ev = eig.eigenvalues();
  const double cond = ev(2) / std::max(ev(0), 1e-300);
  if (!(cond < 1e8)) {
    const Vec3 dir = eig.eigenvectors().col(0);
    std::ostringstream msg;
    msg << "com_calibrate: excitation is rank deficient (condition " << cond
        << "); direction (" << dir.x() << ", " << dir.y() << ", " << dir.z()
        << ") is unobserved. Vary the commanded force axes.";
    throw std::invalid_argument(msg.str());
  }

  ComCalibration out;
  out.condition = cond;
  out.covariance_shape = xtx.inverse();
  out.offset = out.covariance_shape * xty;
  return out;
}

}  // namespace aic::est
