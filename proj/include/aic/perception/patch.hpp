#pragma once

#include <optional>

#include "aic/perception/camera.hpp"

namespace aic::perception {

/// Local planar patch fitted in the tool frame: unit normal oriented toward
/// the tool (z component negative), centroid of the selected points, and the
/// intersection of the tool z axis with the patch plane.
struct SurfacePatch {
  Vec3 normal = -Vec3::UnitZ();
  Vec3 centroid = Vec3::Zero();
  /// Distance along z_T from the tool origin to the patch plane.
  double distance = 0.0;
  Vec3 contact_point = Vec3::Zero();
  int point_count = 0;
};

/// Keeps the points within `radius` of the tool z axis. The selection test is
/// the cross-product distance ||p x e_z|| <= radius (boundary inclusive).
PointCloud select_cylinder(const PointCloud& cloud_T, double radius = 0.1);

/// Fits a plane to tool-frame points: centroid plus the singular vector of the
/// smallest singular value of the centered cloud. Returns no estimate when
/// fewer than 3 points are given, the points are rank deficient (collinear),
/// or the plane is close to parallel to the tool axis (|e_z . normal| < 0.05),
/// where the axis intersection is ill-conditioned.
std::optional<SurfacePatch> fit_patch(const PointCloud& cloud_T);

}  // namespace aic::perception
