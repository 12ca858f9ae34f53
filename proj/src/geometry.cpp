#include "bic/geometry.hpp"

namespace bic {

std::string to_string(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::Plane: return "plane";
    case BackgroundKind::Sphere: return "sphere";
    case BackgroundKind::Torus: return "torus";
  }
  return "?";
}

BackgroundKind background_from_string(const std::string& name) {
  if (name == "plane") return BackgroundKind::Plane;
  if (name == "sphere") return BackgroundKind::Sphere;
  if (name == "torus") return BackgroundKind::Torus;
  throw IoError("unknown background kind: " + name);
}

double sphere_angle(const Vec3& a, const Vec3& b) {
  // atan2 form is accurate for both tiny and near-pi angles.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double Background::distance(const Vec3& a, const Vec3& b) const {
  switch (kind) {
    case BackgroundKind::Plane: return (a - b).head<2>().norm();
    case BackgroundKind::Sphere: return sphere_angle(a, b);
    case BackgroundKind::Torus: {
      double dx = wrap_half(a.x() - b.x());
      double dy = wrap_half(a.y() - b.y());
      return std::hypot(dx, dy);
    }
  }
  return 0.0;
}

Vec3 Background::geodesic_point(const Vec3& a, const Vec3& b, double t) const {
  switch (kind) {
    case BackgroundKind::Plane: return a + t * (b - a);
    case BackgroundKind::Sphere: {
      double ang = sphere_angle(a, b);
      if (ang < 1e-15) return a;
      double s = std::sin(ang);
      Vec3 p = (std::sin((1.0 - t) * ang) * a + std::sin(t * ang) * b) / s;
      return p.normalized();
    }
    case BackgroundKind::Torus: {
      double dx = wrap_half(b.x() - a.x());
      double dy = wrap_half(b.y() - a.y());
      return torus_canonical(Vec3(a.x() + t * dx, a.y() + t * dy, 0.0));
    }
  }
  return a;
}

void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
  Vec3 ref = std::abs(n.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  t1 = n.cross(ref).normalized();
  t2 = n.cross(t1);
}

}  // namespace bic
