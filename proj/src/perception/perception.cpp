#include <Eigen/SVD>

#include "aic/perception/patch.hpp"

namespace aic::perception {

PointCloud render_cloud(const CameraModel& camera,
                        const std::vector<sim::ContactSurface>& surfaces,
                        const Pose& pose_WT, std::mt19937_64& rng) {
  camera.validate();
  PointCloud cloud;
  cloud.frame = Frame::Camera;
  cloud.points.reserve(static_cast<size_t>(camera.cols) * camera.rows / 4);

  const Pose pose_WC = pose_WT * camera.pose_TC();
  const Mat3 r_WC = pose_WC.orientation.matrix();
  const double f = 0.5 * camera.cols / std::tan(0.5 * camera.fov_x);
  const double cx = 0.5 * camera.cols;
  const double cy = 0.5 * camera.rows;
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int r = 0; r < camera.rows; ++r) {
    for (int c = 0; c < camera.cols; ++c) {
      const Vec3 dir_C =
          Vec3((c + 0.5 - cx) / f, (r + 0.5 - cy) / f, 1.0).normalized();
      const Vec3 dir_W = r_WC * dir_C;
      double best = camera.max_range;
      bool hit = false;
      for (const auto& s : surfaces) {
        if (!s.visible) continue;
        if (const auto h = s.raycast(pose_WC.position, dir_W, best)) {
          best = h->range;
          hit = true;
        }
      }
      if (!hit) continue;
      double range = best;
      if (camera.range_sigma > 0.0) {
        range += camera.range_sigma * gauss(rng);
      }
      cloud.points.push_back(range * dir_C);
    }
  }
  return cloud;
}

PointCloud to_tool_frame(const CameraModel& camera, const PointCloud& cloud_C) {
  if (cloud_C.frame != Frame::Camera) {
    throw std::invalid_argument("to_tool_frame: input must be in frame C");
  }
  PointCloud out;
  out.frame = Frame::Tool;
  out.points.reserve(cloud_C.points.size());
  const Mat3 r_TC = camera.rotation_TC.matrix();
  for (const auto& p : cloud_C.points) {
    out.points.push_back(r_TC * p + camera.offset_T);
  }
  return out;
}

PointCloud select_cylinder(const PointCloud& cloud_T, double radius) {
  if (cloud_T.frame != Frame::Tool) {
    throw std::invalid_argument("select_cylinder: input must be in frame T");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("select_cylinder: radius must be positive");
  }
  PointCloud out;
  out.frame = Frame::Tool;
  for (const auto& p : cloud_T.points) {
    if (p.cross(Vec3::UnitZ()).norm() <= radius) {
      out.points.push_back(p);
    }
  }
  return out;
}

std::optional<SurfacePatch> fit_patch(const PointCloud& cloud_T) {
  if (cloud_T.frame != Frame::Tool) {
    throw std::invalid_argument("fit_patch: input must be in frame T");
  }
  const int n = static_cast<int>(cloud_T.points.size());
  if (n < 3) return std::nullopt;

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : cloud_T.points) centroid += p;
  centroid /= n;

  Eigen::MatrixXd centered(n, 3);
  for (int i = 0; i < n; ++i) {
    centered.row(i) = (cloud_T.points[i] - centroid).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Vec3 sv = svd.singularValues();
  // Collinear samples leave the plane orientation undetermined.
  if (sv(1) < 1e-9 * std::max(sv(0), 1.0)) return std::nullopt;

  Vec3 normal = svd.matrixV().col(2).normalized();
  if (normal.z() > 0.0) normal = -normal;
  if (std::abs(normal.z()) < 0.05) return std::nullopt;

  SurfacePatch patch;
  patch.normal = normal;
  patch.centroid = centroid;
  patch.distance = centroid.dot(normal) / normal.z();
  patch.contact_point = Vec3(0.0, 0.0, patch.distance);
  patch.point_count = n;
  return patch;
}

}  // namespace aic::perception
