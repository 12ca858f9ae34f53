#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bic/gallery.hpp"
#include "bic/measure.hpp"
#include "bic/meshes.hpp"

#include <cmath>
#include <random>

using namespace bic;

namespace {

SignedMeasure cube_measure() { return make_cube(1.0).analytic_curvature; }

SignedMeasure cusp_measure(double a) { return make_cusp(a).analytic_curvature; }

Background plane_bg() { return Background::plane(PlaneDomain::centered_square(2.0)); }

}  // namespace

TEST_CASE("total_mass oracles") {
  CHECK(total_mass(cube_measure()) == doctest::Approx(4.0 * kPi).epsilon(1e-14));

  SignedMeasure zero;
  zero.carrier = plane_bg();
  CHECK(total_mass(zero) == 0.0);

  for (double r : {0.5, 1.0, 3.0}) {
    SignedMeasure can = make_can(r, 2.0).analytic_curvature;
    CHECK(std::abs(total_mass(can) - 4.0 * kPi) < 1e-9);
  }
}

TEST_CASE("jordan_split") {
  SignedMeasure mu = make_atomic(plane_bg(), {{Vec3(0, 0, 0), kPi}, {Vec3(1, 0, 0), -kPi / 2}});
  JordanPair jp = jordan_split(mu);
  REQUIRE(jp.plus.atoms.size() == 1);
  REQUIRE(jp.minus.atoms.size() == 1);
  CHECK(jp.plus.atoms[0].mass == doctest::Approx(kPi));
  CHECK(jp.minus.atoms[0].mass == doctest::Approx(kPi / 2));

  SignedMeasure pos = make_atomic(plane_bg(), {{Vec3(0, 0, 0), 1.0}, {Vec3(1, 0, 0), 2.0}});
  JordanPair jp2 = jordan_split(pos);
  CHECK(total_mass(jp2.plus) == doctest::Approx(total_mass(pos)));
  CHECK(jp2.minus.empty());

  // cusp: 2 pi delta_0 - a |log|z||^{2a-2} dA splits componentwise; the plus
  // part equals the Dirac as a measure (its clipped density is zero)
  SignedMeasure cusp = cusp_measure(1.0);
  JordanPair jc = jordan_split(cusp);
  REQUIRE(jc.plus.atoms.size() == 1);
  CHECK(jc.plus.atoms[0].mass == doctest::Approx(kTwoPi));
  CHECK(total_mass(jc.plus) == doctest::Approx(kTwoPi).epsilon(1e-12));
  REQUIRE(jc.minus.ac.has_value());
  CHECK(jc.minus.atoms.empty());
  CHECK(total_mass(jc.minus) > 0.0);
}

TEST_CASE("jordan split mass identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mass(-3.0, 3.0), coord(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 8; ++i) atoms.push_back({Vec3(coord(rng), coord(rng), 0), mass(rng)});
    SignedMeasure mu = make_atomic(plane_bg(), atoms);
    JordanPair jp = jordan_split(mu);
    double lhs = total_mass(jp.plus) - total_mass(jp.minus);
    CHECK(lhs == doctest::Approx(total_mass(mu)).epsilon(1e-12));
  }
}

TEST_CASE("gauss_bonnet_residual") {
  CHECK(gauss_bonnet_residual(cube_measure(), 2) == doctest::Approx(0.0).epsilon(1e-14));

  SignedMeasure flat;  // flat torus: empty measure
  flat.carrier = Background::torus();
  CHECK(gauss_bonnet_residual(flat, 0) == 0.0);

  SignedMeasure discs = make_glued_discs(1.0).analytic_curvature;
  CHECK(std::abs(gauss_bonnet_residual(discs, 2)) < 1e-9);
}

TEST_CASE("integrate") {
  SignedMeasure cube = cube_measure();
  CHECK(integrate(cube, [](const Vec3&) { return 1.0; }) ==
        doctest::Approx(total_mass(cube)).epsilon(1e-14));

  // smoothed bump supported near one cube vertex only
  Vec3 p = cube.atoms[0].point;
  auto bump = [p](const Vec3& x) {
    double d = (x - p).norm();
    return d >= 0.5 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - 4.0 * d * d));
  };
  CHECK(integrate(cube, bump) == doctest::Approx(kPi / 2).epsilon(1e-12));

  SignedMeasure dirac = make_atomic(plane_bg(), {{Vec3::Zero(), kTwoPi}});
  CHECK(integrate(dirac, [](const Vec3& z) { return z.squaredNorm(); }) == 0.0);
}

TEST_CASE("integrate linearity") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SignedMeasure mu1 = make_atomic(plane_bg(), {{Vec3(0.2, 0.3, 0), 1.1}, {Vec3(-1, 0.5, 0), -0.7}});
  CurvePart seg;
  seg.polyline.resize(2, 3);
  seg.polyline << 0, 0, 0, 1, 1, 0;
  seg.density.constant = 0.8;
  seg.density.descriptor = "const";
  mu1.curves.push_back(seg);
  SignedMeasure mu2 = make_atomic(plane_bg(), {{Vec3(0.9, -0.4, 0), 2.0}});

  for (int trial = 0; trial < 10; ++trial) {
    double a = u(rng), b = u(rng);
    auto f = [cx = u(rng), cy = u(rng)](const Vec3& p) {
      return std::sin(cx * p.x()) + cy * p.y();
    };
    auto g = [cx = u(rng)](const Vec3& p) { return std::cos(cx * p.x() * p.y()); };
    // linear in f
    double lhs = integrate(mu1, [&](const Vec3& p) { return a * f(p) + b * g(p); });
    double rhs = a * integrate(mu1, f) + b * integrate(mu1, g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    // linear in mu
    SignedMeasure combo = sum(scaled(mu1, a), scaled(mu2, b));
    double lhs2 = integrate(combo, f);
    double rhs2 = a * integrate(mu1, f) + b * integrate(mu2, f);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-10));
  }
}

TEST_CASE("max_atom") {
  CHECK(max_atom(cube_measure()) == doctest::Approx(kPi / 2));
  CHECK(max_atom(cusp_measure(1.0)) == doctest::Approx(kTwoPi));
  SignedMeasure zero;
  zero.carrier = plane_bg();
  CHECK(max_atom(zero) == 0.0);
  // negative atoms do not count toward the largest atom of the positive part
  SignedMeasure neg = make_atomic(plane_bg(), {{Vec3::Zero(), -5.0}});
  CHECK(max_atom(neg) == 0.0);
}

TEST_CASE("atom merge normal form") {
  SignedMeasure mu = make_atomic(
      plane_bg(), {{Vec3(0, 0, 0), 1.0}, {Vec3(1e-13, 0, 0), 2.0}, {Vec3(0.5, 0, 0), -3.0}});
  CHECK(mu.atoms.size() == 2);
  CHECK(total_mass(mu) == doctest::Approx(0.0));
}

TEST_CASE("weak_distance basics") {
  Background sph = Background::sphere();
  TestFunctionSet tset = TestFunctionSet::default_for(sph);
  SignedMeasure mu = make_atomic(sph, {{Vec3(0, 0, 1), 1.0}, {Vec3(1, 0, 0), 0.5}});
  CHECK(weak_distance(mu, mu, tset) == 0.0);

  CHECK_THROWS_AS(weak_distance(mu, mu, TestFunctionSet{}), InvalidArgument);

  // two unit Diracs: lower bound <= min(d, 2), equality after enrichment
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 6; ++trial) {
    Vec3 p(gauss(rng), gauss(rng), gauss(rng)), q(gauss(rng), gauss(rng), gauss(rng));
    p.normalize();
    q.normalize();
    if (sphere_angle(p, q) < 0.05) continue;
    SignedMeasure dp = make_atomic(sph, {{p, 1.0}});
    SignedMeasure dq = make_atomic(sph, {{q, 1.0}});
    double bound = std::min(sphere_angle(p, q), 2.0);
    TestFunctionSet t2 = TestFunctionSet::default_for(sph);
    double before = weak_distance(dp, dq, t2);
    CHECK(before <= bound + 1e-12);
    t2.enrich(sph, {p, q});
    double after = weak_distance(dp, dq, t2);
    CHECK(after <= bound + 1e-12);
    CHECK(after == doctest::Approx(bound).epsilon(1e-12));
  }
}

TEST_CASE("weak_distance is a pseudometric") {
  Background sph = Background::sphere();
  TestFunctionSet tset = TestFunctionSet::default_for(sph);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  auto random_measure = [&] {
    std::vector<Atom> atoms;
    for (int i = 0; i < 4; ++i) {
      Vec3 p(gauss(rng), gauss(rng), gauss(rng));
      p.normalize();
      atoms.push_back({p, gauss(rng)});
    }
    return make_atomic(sph, atoms);
  };
  for (int trial = 0; trial < 8; ++trial) {
    SignedMeasure a = random_measure(), b = random_measure(), c = random_measure();
    double dab = weak_distance(a, b, tset);
    double dba = weak_distance(b, a, tset);
    double dac = weak_distance(a, c, tset);
    double dcb = weak_distance(c, b, tset);
    CHECK(dab == doctest::Approx(dba).epsilon(1e-14));
    CHECK(dab <= dac + dcb + 1e-12);
  }
}

TEST_CASE("icosphere defect measures converge weakly to the round area") {
  Background sph = Background::sphere();
  TestFunctionSet tset = TestFunctionSet::default_for(sph);
  SignedMeasure area;
  area.carrier = sph;
  AcPart ac;
  ac.grid = GridSpec::for_background(sph);
  ac.const_term = 1.0;
  area.ac = ac;

  double prev = 1e300;
  for (int k = 0; k <= 2; ++k) {
    SignedMeasure defect = curvature_measure(icosphere_mesh(k));
    double d = weak_distance(defect, area, tset);
    CHECK(d < prev);
    prev = d;
  }
}
