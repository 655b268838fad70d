#include "artopen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "artopen/error.hpp"

namespace artopen {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross2(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

Plane fit_once(std::span<const Vec3> points, const Vec3& view_origin) {
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= double(points.size());

  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= double(points.size());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 ev = eig.eigenvalues();
  if (ev(2) <= 0.0 || ev(1) <= 1e-12 * ev(2))
    throw Error(ErrorCode::DegenerateInput, "fit_plane: points are collinear");

  Vec3 normal = eig.eigenvectors().col(0).normalized();
  if (normal.dot(view_origin - centroid) < 0.0) normal = -normal;
  return {normal, normal.dot(centroid)};
}

}  // namespace

Pose Pose::about_axis(const Vec3& point, const Vec3& axis, double angle) {
  Pose r;
  r.rotation = Quat(Eigen::AngleAxisd(angle, axis.normalized()));
  r.translation = point - r.rotation * point;
  return r;
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation = rotation.conjugate();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.rotation = (rotation * rhs.rotation).normalized();
  out.translation = rotation * rhs.translation + translation;
  return out;
}

void CameraModel::validate() const {
  if (!(fx > 0.0 && fy > 0.0))
    throw Error(ErrorCode::DegenerateInput, "camera: focal lengths must be positive");
  if (width <= 0 || height <= 0 || cx < 0.0 || cy < 0.0 || cx >= width || cy >= height)
    throw Error(ErrorCode::DegenerateInput, "camera: principal point outside the image");
}

std::optional<double> DepthImage::meters(int u, int v) const {
  if (!inside(u, v)) return std::nullopt;
  const auto raw = at(u, v);
  if (raw == 0) return std::nullopt;
  return raw * 1e-3;
}

double Polygon2D::area() const { return std::abs(signed_area(vertices)); }

bool Polygon2D::contains(const Vec2& p, double tol) const {
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    if (cross2(e, p - a) / len < -tol) return false;
  }
  return true;
}

Vec3 backproject(const Vec2& pixel, double depth_m, const CameraModel& camera) {
  if (!(depth_m > 0.0)) throw Error(ErrorCode::InvalidDepth, "backproject: depth must be positive");
  if (pixel.x() < 0.0 || pixel.y() < 0.0 || pixel.x() > camera.width - 1 ||
      pixel.y() > camera.height - 1)
    throw Error(ErrorCode::OutOfBounds, "backproject: pixel outside the raster");
  return {(pixel.x() - camera.cx) * depth_m / camera.fx,
          (pixel.y() - camera.cy) * depth_m / camera.fy, depth_m};
}

Vec2 project(const Vec3& p, const CameraModel& camera) {
  return {camera.fx * p.x() / p.z() + camera.cx, camera.fy * p.y() / p.z() + camera.cy};
}

Vec3 pixel_ray(const Vec2& pixel, const CameraModel& camera) {
  return Vec3((pixel.x() - camera.cx) / camera.fx, (pixel.y() - camera.cy) / camera.fy, 1.0)
      .normalized();
}

std::optional<Vec3> intersect_ray_plane(const Vec3& origin, const Vec3& dir, const Plane& plane) {
  const double denom = plane.normal.dot(dir);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = (plane.offset - plane.normal.dot(origin)) / denom;
  if (t <= 0.0) return std::nullopt;
  return origin + t * dir;
}

Plane fit_plane(std::span<const Vec3> points, const Vec3& view_origin,
                const PlaneFitOptions& options) {
  if (points.size() < 3) throw Error(ErrorCode::DegenerateInput, "fit_plane: need >= 3 points");
  Plane plane = fit_once(points, view_origin);
  if (!options.reject_outliers) return plane;

  double ss = 0.0;
  for (const auto& p : points) ss += std::pow(plane.signed_distance(p), 2);
  const double sigma = std::sqrt(ss / double(points.size()));
  std::vector<Vec3> kept;
  kept.reserve(points.size());
  for (const auto& p : points)
    if (std::abs(plane.signed_distance(p)) <= 3.0 * sigma) kept.push_back(p);
  if (kept.size() == points.size() || kept.size() < 3) return plane;
  return fit_once(kept, view_origin);
}

Polygon2D convex_hull(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateInput, "convex_hull: need >= 3 distinct points");

  // Monotone chain; `<= 0` drops collinear points from the hull.
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = pts[i];
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Error(ErrorCode::DegenerateInput, "convex_hull: points are collinear");
  return {hull};
}

Quad simplify_to_quad(const Polygon2D& hull) {
  std::vector<Vec2> v = hull.vertices;
  if (v.size() < 3) throw Error(ErrorCode::DegenerateInput, "simplify_to_quad: fewer than 3 vertices");
  if (v.size() == 3) throw Error(ErrorCode::Triangle, "simplify_to_quad: hull is a triangle");
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());

  while (v.size() > 4) {
    const std::size_t n = v.size();
    double best_area = std::numeric_limits<double>::infinity();
    std::size_t best = n;
    Vec2 best_point;
    for (std::size_t i = 0; i < n; ++i) {
      // Collapse edge (i, i+1) by extending edges (i-1, i) and (i+2, i+1).
      const Vec2& prev = v[(i + n - 1) % n];
      const Vec2& a = v[i];
      const Vec2& b = v[(i + 1) % n];
      const Vec2& next = v[(i + 2) % n];
      const Vec2 da = a - prev;
      const Vec2 db = b - next;
      const double denom = cross2(da, db);
      if (std::abs(denom) < 1e-15) continue;
      const double t = cross2(b - a, db) / denom;
      const double s = cross2(b - a, da) / denom;
      if (t <= 0.0 || s <= 0.0) continue;
      const Vec2 x = a + t * da;
      const double added = 0.5 * std::abs(cross2(b - a, x - a));
      if (added < best_area) {
        best_area = added;
        best = i;
        best_point = x;
      }
    }
    if (best == n) throw Error(ErrorCode::DegenerateInput, "simplify_to_quad: polygon is not convex");
    const std::size_t j = (best + 1) % n;
    v[best] = best_point;
    v.erase(v.begin() + std::ptrdiff_t(j));
  }
  return {v[0], v[1], v[2], v[3]};
}

Quad min_area_rect(std::span<const Vec2> points) {
  const Polygon2D hull = convex_hull(points);
  const auto& h = hull.vertices;
  double best = std::numeric_limits<double>::infinity();
  Quad out{};
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec2 e = (h[(i + 1) % h.size()] - h[i]).normalized();
    const Vec2 n(-e.y(), e.x());
    double lo_e = std::numeric_limits<double>::infinity(), hi_e = -lo_e;
    double lo_n = lo_e, hi_n = hi_e;
    for (const auto& p : h) {
      lo_e = std::min(lo_e, p.dot(e));
      hi_e = std::max(hi_e, p.dot(e));
      lo_n = std::min(lo_n, p.dot(n));
      hi_n = std::max(hi_n, p.dot(n));
    }
    const double area = (hi_e - lo_e) * (hi_n - lo_n);
    if (area < best) {
      best = area;
      out = {lo_e * e + lo_n * n, hi_e * e + lo_n * n, hi_e * e + hi_n * n, lo_e * e + hi_n * n};
    }
  }
  return out;
}

double quad_area(const Quad& q) {
  return std::abs(signed_area(std::vector<Vec2>(q.begin(), q.end())));
}

}  // namespace artopen
