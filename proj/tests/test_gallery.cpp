#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bic/convergence.hpp"
#include "bic/gallery.hpp"
#include "bic/geodesic_graph.hpp"
#include "bic/io.hpp"
#include "bic/meshes.hpp"

#include <cmath>

using namespace bic;

TEST_CASE("every closed gallery item satisfies Gauss-Bonnet") {
  std::vector<GalleryItem> items;
  items.push_back(make_cube(1.0));
  items.push_back(make_cube(5.0));
  items.push_back(make_can(0.5, 2.0));
  items.push_back(make_can(3.0, 0.7));
  items.push_back(make_glued_discs(1.0));
  items.push_back(make_glued_discs(2.5));
  items.push_back(make_lantern(8, 8));
  items.push_back(make_icosphere(0));
  items.push_back(make_icosphere(3));
  for (const auto& item : items) {
    REQUIRE(item.euler_char.has_value());
    double res = gauss_bonnet_residual(item.analytic_curvature, *item.euler_char);
    INFO(item.name);
    bool atomic_only = item.analytic_curvature.curves.empty() && !item.analytic_curvature.ac;
    CHECK(std::abs(res) < (atomic_only ? 1e-12 : 1e-9));
  }
}

TEST_CASE("cube") {
  GalleryItem cube = make_cube(1.0);
  REQUIRE(cube.surface.has_value());
  CHECK(validate(*cube.surface).ok());
  SignedMeasure defects = curvature_measure(*cube.surface);
  REQUIRE(defects.atoms.size() == 8);
  for (const Atom& a : defects.atoms) CHECK(a.mass == doctest::Approx(kPi / 2).epsilon(1e-12));
  // scale invariance of the defects
  SignedMeasure big = curvature_measure(make_cube(5.0).surface.value());
  for (const Atom& a : big.atoms) CHECK(a.mass == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(cube.reference("total_curvature") == doctest::Approx(4.0 * kPi));
  CHECK_THROWS_AS(make_cube(-1.0), InvalidArgument);
}

TEST_CASE("can") {
  GalleryItem can = make_can(1.0, 2.0);
  CHECK(std::abs(total_mass(can.analytic_curvature) - 4.0 * kPi) < 1e-9);
  CHECK(can.reference("rim_density") == doctest::Approx(1.0));
  CHECK(can.analytic_curvature.atoms.empty());
  REQUIRE(can.analytic_curvature.curves.size() == 2);
  for (const auto& c : can.analytic_curvature.curves)
    CHECK(c.density.constant == doctest::Approx(1.0));
  GalleryItem can3 = make_can(3.0, 1.0);
  CHECK(can3.reference("rim_density") == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(make_can(0.0, 1.0), InvalidArgument);
}

TEST_CASE("glued discs") {
  GalleryItem discs = make_glued_discs(1.0);
  CHECK(total_mass(discs.analytic_curvature) == doctest::Approx(4.0 * kPi).epsilon(1e-9));
  CHECK(discs.analytic_curvature.atoms.empty());
  // conformal density rho = e^{2u} at |z| = 2 is 1/16
  REQUIRE(discs.metric.has_value());
  double rho = std::pow(conformal_factor(*discs.metric, Vec3(2, 0, 0)), 2.0);
  CHECK(rho == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  // and 1 inside the unit disc
  CHECK(conformal_factor(*discs.metric, Vec3(0.3, 0.2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("cone") {
  GalleryItem cone = make_cone(kPi);
  CHECK(cone.reference("beta") == doctest::Approx(-0.5));
  REQUIRE(cone.analytic_curvature.atoms.size() == 1);
  CHECK(cone.analytic_curvature.atoms[0].mass == doctest::Approx(kPi));

  GalleryItem flat = make_cone(kTwoPi);
  CHECK(flat.analytic_curvature.empty());

  // radial distance reference
  Eigen::MatrixX3d seg(2, 3);
  seg << 0, 0, 0, 1, 0, 0;
  CHECK(length(*cone.metric, seg) ==
        doctest::Approx(cone.reference("radial_distance_to_1")).epsilon(1e-9));
  CHECK_THROWS_AS(make_cone(0.0), InvalidArgument);
}

TEST_CASE("cusp") {
  GalleryItem pseudo = make_cusp(1.0);  // Beltrami pseudosphere
  CHECK(pseudo.reference("finite_distance") == 0.0);
  CHECK(max_atom(pseudo.analytic_curvature) == doctest::Approx(kTwoPi));

  GalleryItem finite = make_cusp(2.0);
  CHECK(finite.reference("finite_distance") == 1.0);

  GalleryItem cyl = make_cusp(0.0);  // half-cylinder: K = 0 away from 0
  CHECK(!cyl.analytic_curvature.ac.has_value());

  // the K < 0 density integrates to a finite negative mass on the chart
  double neg = total_mass(finite.analytic_curvature) - kTwoPi;
  CHECK(neg < 0.0);
  CHECK(std::isfinite(neg));
}

TEST_CASE("hemisphere glued to cylinder") {
  GalleryItem hc = make_hemisphere_cylinder();
  REQUIRE(hc.metric.has_value());
  // conformal density is continuous at the seam: both branches give 1
  double inside = std::pow(conformal_factor(*hc.metric, Vec3(1.0 - 1e-9, 0, 0)), 2.0);
  double outside = std::pow(conformal_factor(*hc.metric, Vec3(1.0 + 1e-9, 0, 0)), 2.0);
  CHECK(inside == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(outside == doctest::Approx(1.0).epsilon(1e-6));
  // int K dA = 2 pi over the chart; the compactification atom adds 2 pi
  double chart_total = total_mass(hc.analytic_curvature);
  CHECK(chart_total == doctest::Approx(kTwoPi).epsilon(1e-9));
  CHECK(chart_total + hc.reference("infinity_atom_mass") ==
        doctest::Approx(hc.reference("compactified_total")).epsilon(1e-9));
}

TEST_CASE("lantern areas") {
  // n = m: the lateral area converges to the cylinder area 2 pi
  for (int n : {64, 128}) {
    double area = lantern_area(n, n);
    CHECK(area == doctest::Approx(kTwoPi).epsilon(0.01));
  }
  // slices = sectors^3: the area diverges; it crosses 10 * (2 pi) by t <= 32
  bool crossed = false;
  for (int t = 2; t <= 32 && !crossed; ++t)
    crossed = lantern_area(t * t * t, t) > 10.0 * kTwoPi;
  CHECK(crossed);

  // the mesh's Heron-formula summation agrees with the closed form
  GalleryItem item = make_lantern(6, 9);
  const ConeSurface& s = *item.surface;
  double heron = 0.0;
  for (int f = 0; f < 2 * 6 * 9; ++f) {
    double a = s.edge_lengths[s.face_edges(f, 0)];
    double b = s.edge_lengths[s.face_edges(f, 1)];
    double c = s.edge_lengths[s.face_edges(f, 2)];
    double sp = 0.5 * (a + b + c);
    heron += std::sqrt(sp * (sp - a) * (sp - b) * (sp - c));
  }
  CHECK(heron == doctest::Approx(lantern_area(6, 9)).epsilon(1e-12));

  // the lantern is developable: interior vertices see angles 2*apex +
  // 4*base = 2 pi exactly, so they are flat points and the whole curvature
  // sits on the two rim rings (defect 2 pi / n each), mirroring the can
  const ConeSurface& ls = *item.surface;
  Eigen::VectorXd defects = angle_defects(ls);
  for (int j = 1; j < 6; ++j)
    for (int i = 0; i < 9; ++i) CHECK(std::abs(defects[j * 9 + i]) < 1e-12);
  SignedMeasure rim_measure = item.analytic_curvature;
  CHECK(rim_measure.atoms.size() == 2 * 9);
  for (const Atom& a : rim_measure.atoms)
    CHECK(a.mass == doctest::Approx(kTwoPi / 9).epsilon(1e-12));
  CHECK(std::abs(gauss_bonnet_residual(rim_measure, 2)) < 1e-9);
  CHECK_THROWS_AS(make_lantern(0, 8), InvalidArgument);
}

TEST_CASE("icosphere") {
  GalleryItem ico0 = make_icosphere(0);
  REQUIRE(ico0.analytic_curvature.atoms.size() == 12);
  for (const Atom& a : ico0.analytic_curvature.atoms)
    CHECK(a.mass == doctest::Approx(kPi / 3).epsilon(1e-12));

  double prev_max = 1e300;
  for (int k = 0; k <= 3; ++k) {
    SignedMeasure defect = make_icosphere(k).analytic_curvature;
    CHECK(total_mass(defect) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    double mx = max_atom(defect);
    CHECK(mx < prev_max);
    prev_max = mx;
  }
}

TEST_CASE("gallery constructors are deterministic") {
  CHECK(mesh_to_json(*make_cube(1.0).surface) == mesh_to_json(*make_cube(1.0).surface));
  CHECK(measure_to_json(make_can(1.0, 2.0, 4096).analytic_curvature) ==
        measure_to_json(make_can(1.0, 2.0, 4096).analytic_curvature));
  CHECK(metric_to_json(*make_cusp(1.5).metric) == metric_to_json(*make_cusp(1.5).metric));
}

namespace {

// unfolding oracle: distance on the cone of total angle theta between
// (rho1, psi1) and (rho2, psi2) in intrinsic polar coordinates
double cone_oracle(double theta, double rho1, double psi1, double rho2, double psi2) {
  double dpsi = std::abs(psi1 - psi2);
  dpsi = std::min(dpsi, theta - dpsi);
  if (dpsi >= kPi) return rho1 + rho2;  // geodesic passes through the apex
  return std::sqrt(rho1 * rho1 + rho2 * rho2 - 2.0 * rho1 * rho2 * std::cos(dpsi));
}

}  // namespace

TEST_CASE("polyhedral cone twin agrees with the conformal cone") {
  // cone of angle theta as a flat triangulated surface vs the plane metric;
  // both are checked against the unfolding oracle and against each other
  double theta = 1.3 * kPi;
  double R = 1.0;
  const int rings = 24, sectors = 96;
  ConeSurface mesh = cone_cap_mesh(theta, R, rings, sectors);
  REQUIRE(validate(mesh).ok());
  GeodesicGraph g = build_geodesic_graph(mesh, 3);

  GalleryItem cone = make_cone(theta);
  double beta = cone.reference("beta");
  const int level = 4, steiner = 3;
  DistanceSolver solver(*cone.metric, level, steiner);
  // polar substrate of the plane solver: rings 6*2^level over the disc R=1.5
  const int conf_rings = 6 << level, conf_sectors = 12 << level;
  double dr = 1.5 / conf_rings;

  // apex-to-ring distances
  for (double target_rho : {0.3, 0.6, 0.9}) {
    int ring = static_cast<int>(std::lround(target_rho * rings / R));
    double mesh_rho = double(ring) * R / rings;
    double mesh_d = shortest_path(g, 0, 1 + (ring - 1) * sectors);
    CHECK(mesh_d == doctest::Approx(mesh_rho).epsilon(1e-9));

    double target_chart = std::pow((beta + 1.0) * target_rho, 1.0 / (beta + 1.0));
    int j = std::max(1, static_cast<int>(std::lround(target_chart / dr)));
    double chart_r = j * dr;  // node-aligned query, no snapping error
    double conf_rho = std::pow(chart_r, beta + 1.0) / (beta + 1.0);
    double conf_d = solver.distance(Vec3::Zero(), Vec3(chart_r, 0, 0));
    // midpoint-rule arc weights carry ~1e-4 relative error away from the atom
    CHECK(conf_d == doctest::Approx(conf_rho).epsilon(1e-3));
  }

  // same-ring chords
  int mring = 18;
  double mesh_rho = double(mring) * R / rings;
  int target_chart_j = static_cast<int>(
      std::lround(std::pow((beta + 1.0) * mesh_rho, 1.0 / (beta + 1.0)) / dr));
  double chart_r = target_chart_j * dr;
  double conf_rho = std::pow(chart_r, beta + 1.0) / (beta + 1.0);
  // shallow chords: deep dives toward the apex pick up graph stretch beyond
  // what this refinement resolves
  for (int step : {8, 16, 24}) {
    int v1 = 1 + (mring - 1) * sectors;
    int v2 = v1 + step;
    double mesh_d = shortest_path(g, v1, v2);
    double mesh_psi = theta * step / sectors;
    CHECK(mesh_d ==
          doctest::Approx(cone_oracle(theta, mesh_rho, 0, mesh_rho, mesh_psi)).epsilon(0.01));

    int istep = std::max(1, static_cast<int>(std::lround(
                                 (mesh_psi / (beta + 1.0)) * conf_sectors / kTwoPi)));
    double chart_phi = kTwoPi * istep / conf_sectors;  // node-aligned angle
    double conf_psi = (beta + 1.0) * chart_phi;
    Vec3 p(chart_r, 0, 0);
    Vec3 q(chart_r * std::cos(chart_phi), chart_r * std::sin(chart_phi), 0);
    double conf_d = solver.distance(p, q);
    double oracle = cone_oracle(theta, conf_rho, 0, conf_rho, conf_psi);
    CHECK(conf_d == doctest::Approx(oracle).epsilon(0.01));
    // cross-check the two representations through their oracle ratios
    CHECK(conf_d / oracle ==
          doctest::Approx(mesh_d / cone_oracle(theta, mesh_rho, 0, mesh_rho, mesh_psi))
              .epsilon(0.015));
  }
}
