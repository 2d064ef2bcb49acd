#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "aic/perception/patch.hpp"
#include "aic/sim/surface.hpp"

using namespace aic;
using namespace aic::perception;

namespace {

Pose tool_at_origin() {
  return Pose(Vec3::Zero(), Rotation::identity(), Frame::World, Frame::Tool);
}

sim::ContactSurface facing_plane(double z_W) {
  sim::ContactSurface s;
  s.geometry = sim::Plane{Vec3(0, 0, z_W), -Vec3::UnitZ()};
  return s;
}

PointCloud tool_cloud(std::vector<Vec3> points) {
  PointCloud c;
  c.frame = Frame::Tool;
  c.points = std::move(points);
  return c;
}

}  // namespace

TEST_CASE("no visible surface gives an empty cloud") {
  CameraModel cam;
  cam.cols = 9;
  cam.rows = 7;
  cam.range_sigma = 0.0;
  std::mt19937_64 rng(1);
  auto wall = facing_plane(0.55);
  wall.visible = false;
  const PointCloud cloud = render_cloud(cam, {wall}, tool_at_origin(), rng);
  CHECK(cloud.points.empty());
}

TEST_CASE("center pixel of an axis-aligned camera ranges the plane exactly") {
  CameraModel cam;
  cam.cols = 9;
  cam.rows = 7;
  cam.range_sigma = 0.0;
  std::mt19937_64 rng(1);
  // Default mounting puts the camera 0.45 m behind the tool origin, so a
  // plane 0.55 m ahead of the tool is exactly 1 m from the camera.
  const PointCloud cloud =
      render_cloud(cam, {facing_plane(0.55)}, tool_at_origin(), rng);
  CHECK(cloud.points.size() == 9 * 7);
  double best = 1e9;
  Vec3 center = Vec3::Zero();
  for (const auto& p : cloud.points) {
    const double off_axis = p.head<2>().norm();
    if (off_axis < best) {
      best = off_axis;
      center = p;
    }
  }
  CHECK(best < 1e-12);
  CHECK(std::abs(center.z() - 1.0) < 1e-12);
}

TEST_CASE("selected point count at one meter matches the expected order") {
  CameraModel cam;  // full-resolution default
  cam.range_sigma = 0.0;
  std::mt19937_64 rng(1);
  const PointCloud cloud_C =
      render_cloud(cam, {facing_plane(1.0)}, tool_at_origin(), rng);
  const PointCloud cloud_T = to_tool_frame(cam, cloud_C);
  const PointCloud sel = select_cylinder(cloud_T, 0.1);
  CHECK(sel.points.size() > 250);
  CHECK(sel.points.size() < 1000);
}

TEST_CASE("rendering is deterministic per seed") {
  CameraModel cam;
  cam.cols = 17;
  cam.rows = 13;
  std::mt19937_64 a(5), b(5), c(6);
  const PointCloud pa = render_cloud(cam, {facing_plane(0.8)}, tool_at_origin(), a);
  const PointCloud pb = render_cloud(cam, {facing_plane(0.8)}, tool_at_origin(), b);
  const PointCloud pc = render_cloud(cam, {facing_plane(0.8)}, tool_at_origin(), c);
  REQUIRE(pa.points.size() == pb.points.size());
  bool same = true;
  for (size_t i = 0; i < pa.points.size(); ++i) {
    same = same && pa.points[i] == pb.points[i];
  }
  CHECK(same);
  bool differs = false;
  for (size_t i = 0; i < std::min(pa.points.size(), pc.points.size()); ++i) {
    differs = differs || pa.points[i] != pc.points[i];
  }
  CHECK(differs);
}

TEST_CASE("to_tool_frame applies the mounting transform") {
  CameraModel cam;
  PointCloud c;
  c.frame = Frame::Camera;
  c.points = {Vec3(0, 0, 1.0)};
  const PointCloud t = to_tool_frame(cam, c);
  CHECK((t.points[0] - Vec3(0, 0, 0.55)).norm() < 1e-12);

  PointCloud wrong;
  wrong.frame = Frame::Tool;
  CHECK_THROWS_AS(to_tool_frame(cam, wrong), std::invalid_argument);
}

TEST_CASE("cylinder selection is boundary inclusive") {
  const PointCloud cloud = tool_cloud(
      {Vec3(0, 0, 0.7), Vec3(0.1, 0, 0.5), Vec3(0.2, 0, 0.5)});
  const PointCloud sel = select_cylinder(cloud, 0.1);
  REQUIRE(sel.points.size() == 2);
  CHECK(sel.points[0] == Vec3(0, 0, 0.7));
  CHECK(sel.points[1] == Vec3(0.1, 0, 0.5));
  CHECK_THROWS_AS(select_cylinder(cloud, 0.0), std::invalid_argument);
}

TEST_CASE("patch fit of an axis-aligned plane") {
  const PointCloud cloud = tool_cloud({Vec3(0.05, 0, 1), Vec3(-0.05, 0.02, 1),
                                       Vec3(0, -0.04, 1), Vec3(0.03, 0.03, 1)});
  const auto patch = fit_patch(cloud);
  REQUIRE(patch.has_value());
  CHECK((patch->normal - Vec3(0, 0, -1)).norm() < 1e-12);
  CHECK(std::abs(patch->distance - 1.0) < 1e-12);
  CHECK((patch->contact_point - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK(patch->point_count == 4);
}

TEST_CASE("patch fit of a tilted plane finds the axis intersection") {
  // Plane x + z = 2 sampled near the tool axis.
  std::vector<Vec3> pts;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng);
    pts.push_back(Vec3(x, y, 2.0 - x));
  }
  const auto patch = fit_patch(tool_cloud(std::move(pts)));
  REQUIRE(patch.has_value());
  const Vec3 expected = -Vec3(1, 0, 1).normalized();
  CHECK((patch->normal - expected).norm() < 1e-9);
  CHECK(std::abs(patch->distance - 2.0) < 1e-9);
}

TEST_CASE("patch fit needs three non-collinear points") {
  CHECK_FALSE(fit_patch(tool_cloud({Vec3(0, 0, 1), Vec3(1, 0, 1)})).has_value());
  CHECK_FALSE(fit_patch(tool_cloud({Vec3(0, 0, 1), Vec3(0.1, 0, 1),
                                    Vec3(0.2, 0, 1)}))
                  .has_value());
}

TEST_CASE("patch fit rejects planes parallel to the tool axis") {
  // A wall containing the z axis: the axis never intersects it.
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) {
    pts.push_back(Vec3(0.0, 0.01 * i, 0.5 + 0.03 * i));
  }
  pts.push_back(Vec3(0.0, -0.05, 0.6));
  CHECK_FALSE(fit_patch(tool_cloud(std::move(pts))).has_value());
}

TEST_CASE("svd normal equals the smallest-eigenvector oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::normal_distribution<double> n(0.0, 0.01);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> npts(4, 50);
    const int count = npts(rng);
    // Random plane whose normal keeps a usable z component.
    Vec3 normal;
    do {
      normal = Vec3(u(rng) * 5, u(rng) * 5, u(rng) * 5);
    } while (normal.norm() < 0.1 || std::abs(normal.normalized().z()) < 0.1);
    normal.normalize();
    const double offset = 1.0;
    std::vector<Vec3> pts;
    for (int i = 0; i < count; ++i) {
      // Point on the plane n.p = offset, plus slight in-plane jitter.
      Vec3 p = offset * normal;
      const Vec3 a = normal.unitOrthogonal();
      const Vec3 b = normal.cross(a);
      p += u(rng) * a + u(rng) * b + n(rng) * normal;
      pts.push_back(p);
    }
    PointCloud cloud = tool_cloud(pts);
    const auto patch = fit_patch(cloud);
    REQUIRE(patch.has_value());

    Vec3 centroid = Vec3::Zero();
    for (const auto& p : cloud.points) centroid += p;
    centroid /= static_cast<double>(cloud.points.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& p : cloud.points) {
      const Vec3 d = p - centroid;
      cov += d * d.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    Vec3 oracle = eig.eigenvectors().col(0);
    if (oracle.dot(patch->normal) < 0.0) oracle = -oracle;
    const double angle =
        std::atan2(oracle.cross(patch->normal).norm(), oracle.dot(patch->normal));
    CHECK(angle < 1e-6);
  }
}

TEST_CASE("patch distance is invariant to rotating the cloud about the axis") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<Vec3> pts;
  for (int i = 0; i < 40; ++i) {
    const double x = u(rng), y = u(rng);
    pts.push_back(Vec3(x, y, 1.3 - 0.4 * x + 0.2 * y));
  }
  const auto base = fit_patch(tool_cloud(pts));
  REQUIRE(base.has_value());
  const Rotation rz = Rotation::from_axis_angle(Vec3::UnitZ(), 1.1);
  std::vector<Vec3> rotated;
  for (const auto& p : pts) rotated.push_back(rz * p);
  const auto turned = fit_patch(tool_cloud(std::move(rotated)));
  REQUIRE(turned.has_value());
  CHECK(std::abs(base->distance - turned->distance) < 1e-9);
  CHECK((rz * base->normal - turned->normal).norm() < 1e-9);
}

TEST_CASE("noisy plane distance averages below a millimeter") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::normal_distribution<double> noise(0.0, 0.005);
  std::vector<Vec3> pts;
  for (int i = 0; i < 1000; ++i) {
    pts.push_back(Vec3(u(rng), u(rng), 0.5 + noise(rng)));
  }
  const auto patch = fit_patch(tool_cloud(std::move(pts)));
  REQUIRE(patch.has_value());
  CHECK(std::abs(patch->distance - 0.5) < 1e-3);
  const double angle = std::acos(std::min(1.0, -patch->normal.z()));
  CHECK(angle < 0.5 * M_PI / 180.0);
}
