#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aic/types.hpp"

namespace aic::sim {

/// Penalty-contact parameters of a surface. `stiffness` [N/m] and `damping`
/// [N s/m] shape the normal force, `friction` is the Coulomb coefficient for
/// the tangential force.
struct PenaltyParams {
  double stiffness = 5000.0;
  double damping = 50.0;
  double friction = 0.3;
};

/// Infinite plane through `point` with unit outward normal (toward free
/// space).
struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

/// One sinusoidal component of a procedural height field.
struct HeightFieldTerm {
  double amplitude = 0.0;
  double kx = 0.0;
  double ky = 0.0;
  double phase = 0.0;
};

/// Smooth height field z = h(x, y) over a bounded sheet, expressed in a local
/// frame S whose z axis is the outward direction. `extent_x/y` bound the
/// sheet, centered on the local origin. Heights and gradients are analytic, so
/// normals are exact.
struct HeightField {
  Vec3 origin_W = Vec3::Zero();
  Rotation rotation_WS;
  double extent_x = 1.0;
  double extent_y = 1.0;
  std::vector<HeightFieldTerm> terms;

  double height(double x, double y) const;
  Eigen::Vector2d gradient(double x, double y) const;
  bool inside(double x, double y) const {
    return std::abs(x) <= 0.5 * extent_x && std::abs(y) <= 0.5 * extent_y;
  }
  double max_amplitude() const;

  /// Doubly curved sheet from a handful of seeded smooth components.
  static HeightField doubly_curved(double extent_x, double extent_y,
                                   double amplitude, unsigned seed);
};

/// Triangle mesh with outward orientation given by the winding order.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

struct RayHit {
  double range = 0.0;
  Vec3 point_W = Vec3::Zero();
};

/// Result of a penetration probe at a point: depth > 0 along the outward
/// normal, plus the surface point the probe maps to.
struct ContactProbe {
  double depth = 0.0;
  Vec3 normal_W = Vec3::UnitZ();
  Vec3 point_W = Vec3::Zero();
};

/// Closest surface point to a query point in free space.
struct SurfacePoint {
  Vec3 point_W = Vec3::Zero();
  Vec3 normal_W = Vec3::UnitZ();
  double distance = 0.0;
};

/// A contact surface: one geometry, its penalty parameters, and whether the
/// synthetic depth camera can see it. Invisible surfaces still exert contact
/// forces; they model pushes whose geometry the perception stack cannot
/// observe.
struct ContactSurface {
  std::string name = "surface";
  std::variant<Plane, HeightField, TriMesh> geometry = Plane{};
  PenaltyParams contact;
  bool visible = true;

  void validate() const;

  std::optional<RayHit> raycast(const Vec3& origin_W, const Vec3& dir_W,
                                double max_range) const;
  std::optional<ContactProbe> probe(const Vec3& point_W) const;
  SurfacePoint closest_point(const Vec3& target_W) const;
};

struct ContactWrench {
  /// Contact wrench about the tool origin, expressed in W. The tip coincides
  /// with the tool origin, so the torque part is zero; the caller maps the
  /// force to a body wrench via the tool lever arm.
  Wrench wrench_tool_W;
  /// Raw tip force in W, the quantity the simulated force sensor measures.
  Vec3 tip_force_W = Vec3::Zero();
  bool in_contact = false;
};

/// Penalty contact force at the tool tip against every penetrated surface.
/// Normal component: max(0, stiffness * depth - damping * separation_rate).
/// Tangential component: Coulomb friction opposing sliding with magnitude
/// at most friction * normal, linearly regularized below 1 mm/s slip.
ContactWrench contact_wrench(const std::vector<ContactSurface>& surfaces,
                             const Pose& pose_WT, const Vec3& tip_velocity_W);

}  // namespace aic::sim
