#include "bic/gallery.hpp"

#include "bic/expr.hpp"
#include "bic/meshes.hpp"

#include <cmath>

namespace bic {

namespace {

const std::vector<std::string> kPlaneVars = {"x", "y", "r"};

ScalarField plane_field(const Expr& e) {
  return [e](const Vec3& p) {
    double vals[3] = {p.x(), p.y(), std::hypot(p.x(), p.y())};
    return e.eval(vals, 3);
  };
}

FieldPotential plane_potential(const std::string& expr_text) {
  FieldPotential f;
  Expr e = Expr::compile(expr_text, kPlaneVars);
  f.fn = plane_field(e);
  f.descriptor = expr_text;
  return f;
}

Eigen::MatrixX3d circle_polyline(double radius, double z, int n) {
  Eigen::MatrixX3d pts(n + 1, 3);
  for (int i = 0; i <= n; ++i) {
    double a = kTwoPi * (i % n) / n;
    pts.row(i) = Vec3(radius * std::cos(a), radius * std::sin(a), z);
  }
  return pts;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RadialProfile radial_fn(const std::string& text) {
  Expr e = Expr::compile(text, {"r"});
  return [e](double r) { return e.eval(&r, 1); };
}

}  // namespace

double GalleryItem::reference(const std::string& quantity) const {
  for (const auto& r : references)
    if (r.quantity == quantity) return r.value;
  throw InvalidArgument("no reference value named " + quantity);
}

GalleryItem make_cube(double a) {
  if (!(a > 0)) throw InvalidArgument("cube side must be positive");
  GalleryItem item;
  item.name = "cube";
  item.surface = cube_mesh(a);
  SignedMeasure mu;
  mu.carrier = Background::plane(PlaneDomain::centered_square(a));
  for (int i = 0; i < 8; ++i)
    mu.atoms.push_back({item.surface->positions.row(i), 0.5 * kPi});
  mu.normalize();
  item.analytic_curvature = mu;
  item.euler_char = 2;
  item.references = {{"total_curvature", 2.0 * kTwoPi, "paper"},
                     {"vertex_defect", 0.5 * kPi, "paper"}};
  return item;
}

GalleryItem make_can(double r, double h, int circle_points) {
  if (!(r > 0) || !(h > 0)) throw InvalidArgument("can needs positive radius and height");
  GalleryItem item;
  item.name = "can";
  int bands = std::max(1, static_cast<int>(std::lround(h / (kTwoPi * r / 96))));
  item.surface = can_mesh(r, h, 96, bands);
  SignedMeasure mu;
  mu.carrier = Background::plane(PlaneDomain::centered_square(r + h));
  for (double z : {0.0, h}) {
    CurvePart part;
    part.polyline = circle_polyline(r, z, circle_points);
    part.density.constant = 1.0 / r;
    part.density.descriptor = "const";
    mu.curves.push_back(std::move(part));
  }
  item.analytic_curvature = std::move(mu);
  item.euler_char = 2;
  item.references = {{"total_curvature", 2.0 * kTwoPi, "paper"},
                     {"rim_density", 1.0 / r, "paper"}};
  return item;
}

GalleryItem make_glued_discs(double r, int circle_points) {
  if (!(r > 0)) throw InvalidArgument("disc radius must be positive");
  GalleryItem item;
  item.name = "glued_discs";
  Background bg = Background::plane(PlaneDomain::centered_square(3.0));
  ConformalMetric metric;
  metric.background = bg;
  // rho = 1 inside the unit circle, |z|^{-4} outside; r only scales the metric
  metric.potential = plane_potential("ifle(r, 1, 0, -2*log(r))");
  metric.scale = r;
  item.metric = std::move(metric);
  SignedMeasure mu;
  mu.carrier = bg;
  CurvePart part;
  part.polyline = circle_polyline(1.0, 0.0, circle_points);
  // jump of geodesic curvature 2/r, times the metric speed r along the seam
  part.density.constant = 2.0;
  part.density.descriptor = "const";
  mu.curves.push_back(std::move(part));
  item.analytic_curvature = std::move(mu);
  item.euler_char = 2;
  item.references = {{"total_curvature", 2.0 * kTwoPi, "paper"},
                     {"conformal_density_at_2", 1.0 / 16.0, "paper"}};
  return item;
}

GalleryItem make_cone(double theta) {
  if (!(theta > 0)) throw InvalidArgument("cone angle must be positive");
  double beta = theta / kTwoPi - 1.0;
  GalleryItem item;
  item.name = "cone";
  Background bg = Background::plane(PlaneDomain::centered_square(1.5));
  ConformalMetric metric;
  metric.background = bg;
  // beta = 0 would evaluate 0*log(0) = nan at the origin
  metric.potential = plane_potential(beta == 0.0 ? "0" : fmt(beta) + "*log(r)");
  double mass = kTwoPi - theta;
  if (mass != 0.0) metric.curvature_atoms.push_back({Vec3::Zero(), mass});
  item.metric = std::move(metric);
  SignedMeasure mu;
  mu.carrier = bg;
  if (mass != 0.0) mu.atoms.push_back({Vec3::Zero(), mass});
  item.analytic_curvature = std::move(mu);
  item.references = {{"beta", beta, "paper"},
                     {"atom_mass", mass, "paper"},
                     {"radial_distance_to_1", 1.0 / (beta + 1.0), "derived"}};
  return item;
}

GalleryItem make_cusp(double a) {
  if (a < 0) throw InvalidArgument("cusp exponent must be >= 0");
  GalleryItem item;
  item.name = "cusp";
  const double rmax = 0.75;  // the full unit disc has unbounded |w| near its rim
  Background bg = Background::plane(PlaneDomain::centered_square(rmax));
  ConformalMetric metric;
  metric.background = bg;
  metric.potential = plane_potential(
      a == 0.0 ? "-log(r)" : "-log(r) - " + fmt(a) + "*log(abs(log(r)))");
  metric.curvature_atoms.push_back({Vec3::Zero(), kTwoPi});
  item.metric = std::move(metric);

  SignedMeasure mu;
  mu.carrier = bg;
  mu.atoms.push_back({Vec3::Zero(), kTwoPi});
  if (a > 0) {
    RadialAc rad;
    rad.center = Vec3::Zero();
    rad.rmax = rmax;
    rad.descriptor = "-" + fmt(a) + "*pow(abs(log(r))," + fmt(2.0 * a - 2.0) + ")";
    rad.area_scale_descriptor = "1/(r*r*pow(abs(log(r))," + fmt(2.0 * a) + "))";
    rad.profile = radial_fn(rad.descriptor);
    rad.area_scale = radial_fn(rad.area_scale_descriptor);
    AcPart ac;
    ac.grid = GridSpec::for_background(bg);
    ac.density = std::move(rad);
    mu.ac = std::move(ac);
  }
  item.analytic_curvature = std::move(mu);
  item.references = {{"origin_atom", kTwoPi, "paper"},
                     {"finite_distance", a > 1 ? 1.0 : 0.0, "paper"}};
  return item;
}

GalleryItem make_hemisphere_cylinder() {
  GalleryItem item;
  item.name = "hemisphere_cylinder";
  Background bg = Background::plane(PlaneDomain::centered_square(2.5));
  ConformalMetric metric;
  metric.background = bg;
  // rho = 4/(1+r^2)^2 inside the unit circle, 1/r^2 outside (continuous at 1)
  metric.potential = plane_potential("ifle(r, 1, log(2/(1+r*r)), -log(r))");
  metric.fd_grid = GridSpec::for_background(bg, 512);
  item.metric = std::move(metric);

  SignedMeasure mu;
  mu.carrier = bg;
  RadialAc rad;
  rad.center = Vec3::Zero();
  rad.rmax = 1.0;
  // Gauss curvature 1 inside the disc, carried with the own-area weight
  rad.descriptor = "1";
  rad.area_scale_descriptor = "4/(1+r*r)^2";
  rad.profile = radial_fn(rad.descriptor);
  rad.area_scale = radial_fn(rad.area_scale_descriptor);
  AcPart ac;
  ac.grid = GridSpec::for_background(bg);
  ac.density = std::move(rad);
  mu.ac = std::move(ac);
  item.analytic_curvature = std::move(mu);
  item.references = {{"curvature_inside", 1.0, "paper"},
                     {"density_at_seam", 1.0, "paper"},
                     {"infinity_atom_mass", kTwoPi, "paper"},
                     {"compactified_total", 2.0 * kTwoPi, "paper"}};
  return item;
}

GalleryItem make_lantern(int m, int n) {
  GalleryItem item;
  item.name = "lantern";
  item.surface = lantern_mesh(m, n, true);
  item.analytic_curvature = curvature_measure(*item.surface);
  item.euler_char = 2;
  item.references = {{"lateral_area", lantern_area(m, n), "derived"},
                     {"cylinder_area", kTwoPi, "derived"},
                     {"total_curvature", 2.0 * kTwoPi, "derived"}};
  return item;
}

GalleryItem make_icosphere(int k) {
  GalleryItem item;
  item.name = "icosphere";
  item.surface = icosphere_mesh(k);
  item.analytic_curvature = curvature_measure(*item.surface);
  item.euler_char = 2;
  item.references = {{"total_curvature", 2.0 * kTwoPi, "trivial"},
                     {"round_area", 2.0 * kTwoPi, "trivial"}};
  return item;
}

}  // namespace bic
