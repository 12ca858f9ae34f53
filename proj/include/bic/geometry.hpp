#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace bic {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error taxonomy shared across the library. The CLI maps MathError -> exit 1
// and IoError -> exit 2.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidMeasure : MathError {
  using MathError::MathError;
};
struct InvalidArgument : MathError {
  using MathError::MathError;
};
struct SingularEvaluation : MathError {
  using MathError::MathError;
};
struct BalanceViolation : MathError {
  using MathError::MathError;
};
struct InadmissibleAtom : MathError {
  Vec3 point;
  InadmissibleAtom(const std::string& msg, const Vec3& p) : MathError(msg), point(p) {}
};
struct InfiniteLength : MathError {
  using MathError::MathError;
};
struct AtInfinityEndpoint : MathError {
  using MathError::MathError;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The three background geometries kernels and metrics are defined on.
// Points are always Vec3; plane and torus charts use (x, y, 0).
enum class BackgroundKind { Plane, Sphere, Torus };

std::string to_string(BackgroundKind kind);
BackgroundKind background_from_string(const std::string& name);

// Axis-aligned rectangle; the compact subdomain of a plane chart.
struct PlaneDomain {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(const Vec3& p) const {
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
  }
  static PlaneDomain centered_square(double half_side) {
    return PlaneDomain{-half_side, half_side, -half_side, half_side};
  }
};

// Background geometry: unit round sphere (K=1), flat unit-square torus (K=0),
// or a plane chart restricted to a compact rectangle (K=0).
struct Background {
  BackgroundKind kind = BackgroundKind::Plane;
  std::optional<PlaneDomain> domain;  // plane charts only

  static Background plane(const PlaneDomain& dom) { return Background{BackgroundKind::Plane, dom}; }
  static Background sphere() { return Background{BackgroundKind::Sphere, std::nullopt}; }
  static Background torus() { return Background{BackgroundKind::Torus, std::nullopt}; }

  bool closed() const { return kind != BackgroundKind::Plane; }
  double gauss_curvature() const { return kind == BackgroundKind::Sphere ? 1.0 : 0.0; }

  double area() const {
    switch (kind) {
      case BackgroundKind::Sphere: return 4.0 * kPi;
      case BackgroundKind::Torus: return 1.0;
      case BackgroundKind::Plane:
        if (!domain) throw InvalidArgument("plane background needs a declared domain");
        return domain->area();
    }
    return 0.0;
  }

  // Intrinsic distance between two points of the background.
  double distance(const Vec3& a, const Vec3& b) const;

  // Point at parameter t in [0,1] on the background geodesic from a to b.
  Vec3 geodesic_point(const Vec3& a, const Vec3& b, double t) const;
};

inline double wrap_unit(double x) {
  double y = x - std::floor(x);
  return (y >= 1.0) ? 0.0 : y;
}

// Shortest signed representative of x modulo 1.
inline double wrap_half(double x) {
  double y = x - std::round(x);
  return y;
}

inline Vec3 torus_canonical(const Vec3& p) { return Vec3(wrap_unit(p.x()), wrap_unit(p.y()), 0.0); }

double sphere_angle(const Vec3& a, const Vec3& b);

// Orthonormal tangent frame at a unit vector n.
void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2);

}  // namespace bic
