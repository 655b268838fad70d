#include "artopen/box.hpp"

#include <cmath>

namespace artopen {

OrientedBox OrientedBox::segment(const Vec3& from, const Vec3& to, double half_y, double half_z,
                                 const Vec3& up) {
  OrientedBox box;
  const Vec3 d = to - from;
  const double len = d.norm();
  Vec3 x = len > 1e-12 ? Vec3(d / len) : Vec3::UnitX();
  Vec3 y = up.cross(x);
  if (y.norm() < 1e-9) y = Vec3::UnitY().cross(x);
  y.normalize();
  const Vec3 z = x.cross(y);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  box.rotation = Quat(r);
  box.center = 0.5 * (from + to);
  box.half_extents = Vec3(std::max(0.5 * len, 1e-6), half_y, half_z);
  return box;
}

OrientedBox OrientedBox::transformed(const Pose& pose) const {
  return {pose.apply(center), half_extents, (pose.rotation * rotation).normalized()};
}

bool OrientedBox::contains(const Vec3& p, double tol) const {
  const Vec3 local = rotation.conjugate() * (p - center);
  return (local.cwiseAbs() - half_extents).maxCoeff() <= tol;
}

double OrientedBox::distance(const Vec3& p) const {
  const Vec3 local = rotation.conjugate() * (p - center);
  return (local.cwiseAbs() - half_extents).cwiseMax(0.0).norm();
}

bool intersects(const OrientedBox& a, const OrientedBox& b, double slack) {
  const Mat3 ra = a.axes();
  const Mat3 rb = b.axes();
  const Mat3 r = ra.transpose() * rb;
  const Mat3 abs_r = r.cwiseAbs().array() + 1e-12;
  const Vec3 t = ra.transpose() * (b.center - a.center);
  const Vec3& ea = a.half_extents;
  const Vec3& eb = b.half_extents;

  for (int i = 0; i < 3; ++i) {
    if (std::abs(t(i)) > ea(i) + eb.dot(abs_r.row(i)) - slack) return false;
  }
  for (int j = 0; j < 3; ++j) {
    if (std::abs(t.dot(r.col(j))) > ea.dot(abs_r.col(j)) + eb(j) - slack) return false;
  }
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      const double ra_ = ea(i1) * abs_r(i2, j) + ea(i2) * abs_r(i1, j);
      const double rb_ = eb(j1) * abs_r(i, j2) + eb(j2) * abs_r(i, j1);
      const double dist = std::abs(t(i2) * r(i1, j) - t(i1) * r(i2, j));
      // Cross-product axes are not unit length; scale slack accordingly.
      const double axis_len = std::sqrt(std::max(0.0, 1.0 - r(i, j) * r(i, j)));
      if (dist > ra_ + rb_ - slack * axis_len) return false;
    }
  }
  return true;
}

}  // namespace artopen
