#include "aic/sim/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace aic::sim {
namespace {

constexpr double kSlipRegularization = 1e-3;  // [m/s] full Coulomb above this

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return a + v * ab + w * ac;
}

std::optional<double> ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a,
                                   const Vec3& b, const Vec3& c) {
  // Moeller-Trumbore.
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pv = d.cross(e2);
  const double det = e1.dot(pv);
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 tv = o - a;
  const double u = tv.dot(pv) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 qv = tv.cross(e1);
  const double v = d.dot(qv) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(qv) * inv;
  if (t <= 1e-9) return std::nullopt;
  return t;
}

Vec3 face_normal(const TriMesh& m, const std::array<int, 3>& f) {
  const Vec3& a = m.vertices[f[0]];
  const Vec3& b = m.vertices[f[1]];
  const Vec3& c = m.vertices[f[2]];
  return (b - a).cross(c - a).normalized();
}

// Intersects the 1-D interval [lo, hi] with the preimage of [vmin, vmax]
// under t -> o + t * d. Returns false if empty.
bool slab(double o, double d, double vmin, double vmax, double& lo, double& hi) {
  if (std::abs(d) < 1e-12) return o >= vmin && o <= vmax;
  double t0 = (vmin - o) / d;
  double t1 = (vmax - o) / d;
  if (t0 > t1) std::swap(t0, t1);
  lo = std::max(lo, t0);
  hi = std::min(hi, t1);
  return lo <= hi;
}

}  // namespace

double HeightField::height(double x, double y) const {
  double h = 0.0;
  for (const auto& t : terms) {
    h += t.amplitude * std::sin(t.kx * x + t.ky * y + t.phase);
  }
  return h;
}

Eigen::Vector2d HeightField::gradient(double x, double y) const {
  Eigen::Vector2d g(0.0, 0.0);
  for (const auto& t : terms) {
    const double c = t.amplitude * std::cos(t.kx * x + t.ky * y + t.phase);
    g.x() += c * t.kx;
    g.y() += c * t.ky;
  }
  return g;
}

double HeightField::max_amplitude() const {
  double a = 0.0;
  for (const auto& t : terms) a += std::abs(t.amplitude);
  return a;
}

HeightField HeightField::doubly_curved(double extent_x, double extent_y,
                                       double amplitude, unsigned seed) {
  HeightField hf;
  hf.extent_x = extent_x;
  hf.extent_y = extent_y;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> wavelength(0.35, 1.2);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> share(0.5, 1.5);
  std::uniform_real_distribution<double> mix(-1.0, 1.0);

  constexpr int n = 6;
  double sum_amp = 0.0;
  double sum_slope = 0.0;
  for (int i = 0; i < n; ++i) {
    HeightFieldTerm t;
    const double k = 2.0 * M_PI / wavelength(rng);
    const double cx = mix(rng);
    const double cy = mix(rng);
    const double cn = std::hypot(cx, cy);
    t.kx = k * (cn > 1e-6 ? cx / cn : 1.0);
    t.ky = k * (cn > 1e-6 ? cy / cn : 0.0);
    t.phase = phase(rng);
    t.amplitude = share(rng);
    hf.terms.push_back(t);
    sum_amp += t.amplitude;
    sum_slope += t.amplitude * k;
  }
  // Scale so the worst-case height stays within `amplitude` and the worst-case
  // slope stays gentle enough for the vertical-gap penetration model.
  double scale = amplitude / sum_amp;
  constexpr double max_slope = 0.4;
  if (sum_slope * scale > max_slope) scale = max_slope / sum_slope;
  for (auto& t : hf.terms) t.amplitude *= scale;
  return hf;
}

void ContactSurface::validate() const {
  if (!(contact.stiffness >= 0.0) || !(contact.damping >= 0.0) ||
      !(contact.friction >= 0.0)) {
    throw std::invalid_argument("ContactSurface: negative penalty parameter");
  }
  if (const auto* p = std::get_if<Plane>(&geometry)) {
    if (!(p->normal.norm() > 1e-9)) {
      throw std::invalid_argument("ContactSurface: plane normal is zero");
    }
  } else if (const auto* h = std::get_if<HeightField>(&geometry)) {
    if (!(h->extent_x > 0.0) || !(h->extent_y > 0.0)) {
      throw std::invalid_argument("ContactSurface: height field extent <= 0");
    }
  } else if (const auto* m = std::get_if<TriMesh>(&geometry)) {
    const int nv = static_cast<int>(m->vertices.size());
    if (m->faces.empty()) {
      throw std::invalid_argument("ContactSurface: mesh has no faces");
    }
    for (const auto& f : m->faces) {
      for (int idx : f) {
        if (idx < 0 || idx >= nv) {
          throw std::invalid_argument("ContactSurface: face index out of range");
        }
      }
    }
  }
}

std::optional<RayHit> ContactSurface::raycast(const Vec3& origin_W,
                                              const Vec3& dir_W,
                                              double max_range) const {
  const Vec3 d = dir_W.normalized();
  if (const auto* pl = std::get_if<Plane>(&geometry)) {
    const Vec3 n = pl->normal.normalized();
    const double denom = d.dot(n);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = (pl->point - origin_W).dot(n) / denom;
    if (t <= 1e-9 || t > max_range) return std::nullopt;
    return RayHit{t, origin_W + t * d};
  }

  if (const auto* hf = std::get_if<HeightField>(&geometry)) {
    const Mat3 r_SW = hf->rotation_WS.inverse().matrix();
    const Vec3 o = r_SW * (origin_W - hf->origin_W);
    const Vec3 dd = r_SW * d;
    const double band = hf->max_amplitude() + 1e-3;
    double lo = 1e-9;
    double hi = max_range;
    if (!slab(o.x(), dd.x(), -0.5 * hf->extent_x, 0.5 * hf->extent_x, lo, hi) ||
        !slab(o.y(), dd.y(), -0.5 * hf->extent_y, 0.5 * hf->extent_y, lo, hi) ||
        !slab(o.z(), dd.z(), -band, band, lo, hi)) {
      return std::nullopt;
    }
    double kmax = 0.0;
    for (const auto& t : hf->terms) kmax = std::max(kmax, std::hypot(t.kx, t.ky));
    const double step =
        std::clamp(kmax > 0.0 ? (2.0 * M_PI / kmax) / 6.0 : 0.01, 0.002, 0.02);

    auto f = [&](double t) {
      const Vec3 p = o + t * dd;
      return p.z() - hf->height(p.x(), p.y());
    };
    double t_prev = lo;
    double f_prev = f(t_prev);
    for (double t = lo + step; t_prev < hi; t = std::min(t + step, hi)) {
      const double ft = f(t);
      if (f_prev > 0.0 && ft <= 0.0) {
        double a = t_prev, b = t;
        for (int i = 0; i < 30; ++i) {
          const double m = 0.5 * (a + b);
          (f(m) > 0.0 ? a : b) = m;
        }
        const double thit = 0.5 * (a + b);
        return RayHit{thit, origin_W + thit * d};
      }
      f_prev = ft;
      if (t >= hi) break;
      t_prev = t;
    }
    return std::nullopt;
  }

  const auto& mesh = std::get<TriMesh>(geometry);
  double best = max_range;
  bool found = false;
  for (const auto& fc : mesh.faces) {
    const auto t = ray_triangle(origin_W, d, mesh.vertices[fc[0]],
                                mesh.vertices[fc[1]], mesh.vertices[fc[2]]);
    if (t && *t < best) {
      best = *t;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return RayHit{best, origin_W + best * d};
}

std::optional<ContactProbe> ContactSurface::probe(const Vec3& point_W) const {
  if (const auto* pl = std::get_if<Plane>(&geometry)) {
    const Vec3 n = pl->normal.normalized();
    const double s = (point_W - pl->point).dot(n);
    if (s >= 0.0) return std::nullopt;
    return ContactProbe{-s, n, point_W - s * n};
  }

  if (const auto* hf = std::get_if<HeightField>(&geometry)) {
    const Mat3 r_WS = hf->rotation_WS.matrix();
    const Vec3 p = r_WS.transpose() * (point_W - hf->origin_W);
    if (!hf->inside(p.x(), p.y())) return std::nullopt;
    const double gap = p.z() - hf->height(p.x(), p.y());
    if (gap >= 0.0) return std::nullopt;
    const Eigen::Vector2d g = hf->gradient(p.x(), p.y());
    const Vec3 n_S = Vec3(-g.x(), -g.y(), 1.0).normalized();
    // Vertical gap converted to normal gap; exact for a locally planar patch.
    const double depth = -gap * n_S.z();
    const Vec3 foot_S(p.x(), p.y(), p.z() - gap);
    return ContactProbe{depth, r_WS * n_S, hf->origin_W + r_WS * foot_S};
  }

  const auto& mesh = std::get<TriMesh>(geometry);
  double best_d2 = std::numeric_limits<double>::infinity();
  Vec3 best_q = Vec3::Zero();
  Vec3 best_n = Vec3::UnitZ();
  for (const auto& fc : mesh.faces) {
    const Vec3 q = closest_point_on_triangle(point_W, mesh.vertices[fc[0]],
                                             mesh.vertices[fc[1]],
                                             mesh.vertices[fc[2]]);
    const double d2 = (point_W - q).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_q = q;
      best_n = face_normal(mesh, fc);
    }
  }
  const double s = (point_W - best_q).dot(best_n);
  if (s >= 0.0) return std::nullopt;
  return ContactProbe{-s, best_n, best_q};
}

SurfacePoint ContactSurface::closest_point(const Vec3& target_W) const {
  if (const auto* pl = std::get_if<Plane>(&geometry)) {
    const Vec3 n = pl->normal.normalized();
    const double s = (target_W - pl->point).dot(n);
    return SurfacePoint{target_W - s * n, n, std::abs(s)};
  }

  if (const auto* hf = std::get_if<HeightField>(&geometry)) {
    const Mat3 r_WS = hf->rotation_WS.matrix();
    const Vec3 p = r_WS.transpose() * (target_W - hf->origin_W);
    // Coarse grid scan over the sheet, then a few fixed-point refinements of
    // the foot point. Adequate for gentle procedural sheets; used only by the
    // offline planner.
    const int nx = 64, ny = 64;
    double best_d2 = std::numeric_limits<double>::infinity();
    Eigen::Vector2d best(0, 0);
    for (int i = 0; i <= nx; ++i) {
      for (int j = 0; j <= ny; ++j) {
        const double x = (-0.5 + static_cast<double>(i) / nx) * hf->extent_x;
        const double y = (-0.5 + static_cast<double>(j) / ny) * hf->extent_y;
        const double d2 =
            (Vec3(x, y, hf->height(x, y)) - p).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = {x, y};
        }
      }
    }
    for (int it = 0; it < 12; ++it) {
      // Project the query onto the tangent plane at the current foot point.
      const double h = hf->height(best.x(), best.y());
      const Eigen::Vector2d g = hf->gradient(best.x(), best.y());
      const Vec3 n = Vec3(-g.x(), -g.y(), 1.0).normalized();
      const Vec3 foot(best.x(), best.y(), h);
      const Vec3 proj = p - (p - foot).dot(n) * n;
      Eigen::Vector2d next(
          std::clamp(proj.x(), -0.5 * hf->extent_x, 0.5 * hf->extent_x),
          std::clamp(proj.y(), -0.5 * hf->extent_y, 0.5 * hf->extent_y));
      if ((next - best).norm() < 1e-10) {
        best = next;
        break;
      }
      best = 0.5 * (best + next);
    }
    const double h = hf->height(best.x(), best.y());
    const Eigen::Vector2d g = hf->gradient(best.x(), best.y());
    const Vec3 n_S = Vec3(-g.x(), -g.y(), 1.0).normalized();
    const Vec3 q_S(best.x(), best.y(), h);
    const Vec3 q_W = hf->origin_W + r_WS * q_S;
    return SurfacePoint{q_W, r_WS * n_S, (target_W - q_W).norm()};
  }

  const auto& mesh = std::get<TriMesh>(geometry);
  double best_d2 = std::numeric_limits<double>::infinity();
  SurfacePoint sp;
  for (const auto& fc : mesh.faces) {
    const Vec3 q = closest_point_on_triangle(target_W, mesh.vertices[fc[0]],
                                             mesh.vertices[fc[1]],
                                             mesh.vertices[fc[2]]);
    const double d2 = (target_W - q).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      sp.point_W = q;
      sp.normal_W = face_normal(mesh, fc);
    }
  }
  sp.distance = std::sqrt(best_d2);
  return sp;
}

ContactWrench contact_wrench(const std::vector<ContactSurface>& surfaces,
                             const Pose& pose_WT, const Vec3& tip_velocity_W) {
  ContactWrench out;
  Vec3 f = Vec3::Zero();
  for (const auto& s : surfaces) {
    const auto hit = s.probe(pose_WT.position);
    if (!hit) continue;
    const Vec3& n = hit->normal_W;
    const double separation_rate = tip_velocity_W.dot(n);
    const double fn =
        std::max(0.0, s.contact.stiffness * hit->depth -
                          s.contact.damping * separation_rate);
    if (fn <= 0.0) continue;
    out.in_contact = true;
    f += fn * n;
    const Vec3 vt = tip_velocity_W - separation_rate * n;
    const double slip = vt.norm();
    if (slip > 1e-12 && s.contact.friction > 0.0) {
      const double mag =
          s.contact.friction * fn * std::min(1.0, slip / kSlipRegularization);
      f -= mag * vt / slip;
    }
  }
  out.tip_force_W = f;
  out.wrench_tool_W = Wrench(f, Vec3::Zero());
  return out;
}

}  // namespace aic::sim
