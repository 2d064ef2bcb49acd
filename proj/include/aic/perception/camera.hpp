#pragma once

#include <random>
#include <vector>

#include "aic/sim/surface.hpp"
#include "aic/types.hpp"

namespace aic::perception {

/// Points with an explicit frame tag. Rendering produces camera-frame points;
/// the fitting pipeline works in the tool frame.
struct PointCloud {
  Frame frame = Frame::Camera;
  std::vector<Vec3> points;
};

/// Synthetic time-of-flight depth camera. One ray per pixel through a pinhole
/// with horizontal field of view `fov_x`; range noise is Gaussian along the
/// ray. Mounted on the tool at (`offset_T`, `rotation_TC`), optical z forward.
struct CameraModel {
  int cols = 224;
  int rows = 172;
  double fov_x = 62.0 * M_PI / 180.0;
  double range_sigma = 0.005;
  double max_range = 4.0;
  Vec3 offset_T = Vec3(0.0, 0.0, -0.45);
  Rotation rotation_TC;

  void validate() const {
    if (cols < 1 || rows < 1) {
      throw std::invalid_argument("CameraModel: resolution must be positive");
    }
    if (!(fov_x > 0.0) || !(fov_x < M_PI)) {
      throw std::invalid_argument("CameraModel: fov_x out of (0, pi)");
    }
    if (!(range_sigma >= 0.0) || !(max_range > 0.0)) {
      throw std::invalid_argument("CameraModel: bad range parameters");
    }
  }

  Pose pose_TC() const {
    return Pose(offset_T, rotation_TC, Frame::Tool, Frame::Camera);
  }
};

/// Renders a depth frame against every visible surface. Rays that miss are
/// dropped. Points come back in the camera frame; pixel order is row-major
/// so the same seed yields the identical cloud.
PointCloud render_cloud(const CameraModel& camera,
                        const std::vector<sim::ContactSurface>& surfaces,
                        const Pose& pose_WT, std::mt19937_64& rng);

/// Maps a camera-frame cloud into the tool frame via the mounting transform.
PointCloud to_tool_frame(const CameraModel& camera, const PointCloud& cloud_C);

}  // namespace aic::perception
