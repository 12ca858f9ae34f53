#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bic/green.hpp"
#include "bic/quadrature.hpp"

#include <cmath>
#include <random>

using namespace bic;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec3 p(gauss(rng), gauss(rng), gauss(rng));
  return p.normalized();
}

Background plane_bg() { return Background::plane(PlaneDomain::centered_square(4.0)); }

}  // namespace

TEST_CASE("log_kernel values") {
  Vec3 z(0, 0, 0);
  CHECK(log_kernel(z, Vec3(1, 0, 0)) == doctest::Approx(0.0));
  CHECK(log_kernel(z, Vec3(std::exp(1.0), 0, 0)) == doctest::Approx(-1.0 / kTwoPi));
  CHECK(log_kernel(z, Vec3(std::exp(-kTwoPi), 0, 0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(log_kernel(z, z), SingularEvaluation);
}

TEST_CASE("green_sphere closed form and symmetry") {
  Vec3 n(0, 0, 1), s(0, 0, -1), e(1, 0, 0);
  CHECK(green_sphere(n, s) == doctest::Approx(-1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(green_sphere(n, e) ==
        doctest::Approx(std::log(2.0) / (4.0 * kPi) - 1.0 / (4.0 * kPi)).epsilon(1e-14));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Vec3 x = random_unit(rng), y = random_unit(rng);
    if (sphere_angle(x, y) < 1e-6) continue;
    CHECK(green_sphere(x, y) == green_sphere(y, x));
  }
  CHECK_THROWS_AS(green_sphere(n, n), SingularEvaluation);
}

TEST_CASE("the kernel constant follows from the zero-mean condition") {
  // re-derive c0 = -(1/area) int -(1/2pi) log sin(d/2) dA by quadrature
  Vec3 pole(0.2, 0.4, 0.89);
  pole.normalize();
  double raw = sphere_integrate(pole, 64, [&](const Vec3& y) {
    return -std::log(std::sin(0.5 * sphere_angle(pole, y))) / kTwoPi;
  });
  double c0 = -raw / (4.0 * kPi);
  CHECK(c0 == doctest::Approx(kSphereGreenConstant).epsilon(1e-10));
}

TEST_CASE("green_sphere zero mean at order 64") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    Vec3 x = random_unit(rng);
    double mean = sphere_integrate(x, 64, [&](const Vec3& y) { return green_sphere(x, y); });
    CHECK(std::abs(mean) < 1e-6);
  }
}

TEST_CASE("green_sphere growth bound") {
  // |G| <= C (1 + |log d|); report the fitted constant
  std::mt19937_64 rng(19);
  double C = 0.0;
  for (int i = 0; i < 4000; ++i) {
    Vec3 x = random_unit(rng), y = random_unit(rng);
    double d = sphere_angle(x, y);
    if (d < 1e-12) continue;
    C = std::max(C, std::abs(green_sphere(x, y)) / (1.0 + std::abs(std::log(d))));
  }
  // also probe tiny distances along a fixed great circle
  Vec3 x(1, 0, 0);
  for (double d = 1e-9; d < 1e-2; d *= 10) {
    Vec3 y(std::cos(d), std::sin(d), 0);
    C = std::max(C, std::abs(green_sphere(x, y)) / (1.0 + std::abs(std::log(d))));
  }
  MESSAGE("fitted growth constant C = ", C);
  CHECK(C < 0.5);
}

TEST_CASE("green_torus: symmetry, translation invariance, zero mean") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    Vec3 x(u(rng), u(rng), 0), y(u(rng), u(rng), 0);
    if (Background::torus().distance(x, y) < 1e-6) continue;
    CHECK(green_torus(x, y) == green_torus(y, x));
    Vec3 shift(u(rng), u(rng), 0);
    Vec3 xs = torus_canonical(x + shift), ys = torus_canonical(y + shift);
    CHECK(green_torus(xs, ys) == doctest::Approx(green_torus(x, y)).epsilon(1e-13));
  }
  // zero mean over a uniform midpoint grid at truncation 64
  Vec3 x(0.37, 0.61, 0);
  const int n = 512;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += green_torus(x, Vec3((i + 0.5) / n, (j + 0.5) / n, 0), 64) / (double(n) * n);
  CHECK(std::abs(acc) < 1e-6);
}

TEST_CASE("green_torus truncation stability and the Fourier cross-check") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int i = 0; tested < 8 && i < 100; ++i) {
    Vec3 x(u(rng), u(rng), 0), y(u(rng), u(rng), 0);
    if (Background::torus().distance(x, y) < 0.1) continue;
    ++tested;
    double g64 = green_torus(x, y, 64), g128 = green_torus(x, y, 128);
    CHECK(std::abs(g64 - g128) < 1e-6);
    // the literal partial Fourier sums converge to the same kernel
    double f16 = green_torus_fourier(x, y, 16);
    double f64 = green_torus_fourier(x, y, 64);
    CHECK(std::abs(f64 - g64) < 2e-3);
    CHECK(std::abs(f64 - g64) < std::abs(f16 - g64) + 1e-4);
  }
  CHECK(tested == 8);
}

TEST_CASE("potential of a point mass on the plane is the cone factor") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double beta : {-0.5, 0.5, 2.0}) {
    SignedMeasure mu = make_atomic(plane_bg(), {{Vec3::Zero(), -kTwoPi * beta}});
    for (int i = 0; i < 100; ++i) {
      Vec3 z(u(rng), u(rng), 0);
      if (z.head<2>().norm() < 1e-3) continue;
      double expected = beta * std::log(z.head<2>().norm());
      CHECK(std::abs(potential(plane_bg(), mu, z) - expected) < 1e-12);
    }
  }
}

TEST_CASE("potential: zero measure, balance, singular evaluation") {
  SignedMeasure zero;
  zero.carrier = Background::sphere();
  CHECK(potential(Background::sphere(), zero, Vec3(0, 0, 1)) == 0.0);

  SignedMeasure unbalanced = make_atomic(Background::sphere(), {{Vec3(0, 0, 1), 1.0}});
  CHECK_THROWS_AS(potential(Background::sphere(), unbalanced, Vec3(1, 0, 0)), BalanceViolation);

  SignedMeasure mu = make_atomic(plane_bg(), {{Vec3::Zero(), 1.0}});
  CHECK_THROWS_AS(potential(plane_bg(), mu, Vec3(1e-12, 0, 0)), SingularEvaluation);
}

TEST_CASE("uniform disc potential has the Newton mean-value form") {
  // density of total mass m on the unit disc, evaluated at |z| = 2
  double m = 1.7;
  SignedMeasure mu;
  mu.carrier = plane_bg();
  RadialAc rad;
  rad.center = Vec3::Zero();
  rad.rmax = 1.0;
  rad.profile = [m](double) { return m / kPi; };
  rad.descriptor = "const";
  AcPart ac;
  ac.grid = GridSpec::for_background(mu.carrier);
  ac.density = rad;
  mu.ac = ac;

  Vec3 z(2.0, 0.0, 0.0);
  double expected = -(m / kTwoPi) * std::log(2.0);
  double via_potential = potential(plane_bg(), mu, z);
  CHECK(via_potential == doctest::Approx(expected).epsilon(1e-9));

  // independent brute-force 2D quadrature oracle over the disc
  const int n = 1200;
  double brute = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = -1.0 + (i + 0.5) * 2.0 / n;
      double y = -1.0 + (j + 0.5) * 2.0 / n;
      if (x * x + y * y > 1.0) continue;
      brute += (m / kPi) * log_kernel(z, Vec3(x, y, 0)) * (2.0 / n) * (2.0 / n);
    }
  CHECK(brute == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("potential is linear in the measure") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  SignedMeasure m1 = make_atomic(plane_bg(), {{Vec3(0.3, 0.2, 0), 1.0}, {Vec3(-0.8, 0.1, 0), -0.4}});
  SignedMeasure m2 = make_atomic(plane_bg(), {{Vec3(0.5, -0.9, 0), 0.7}});
  for (int i = 0; i < 10; ++i) {
    double a = u(rng), b = u(rng);
    Vec3 x(u(rng) + 2.5, u(rng), 0);
    double lhs = potential(plane_bg(), sum(scaled(m1, a), scaled(m2, b)), x);
    double rhs = a * potential(plane_bg(), m1, x) + b * potential(plane_bg(), m2, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("weak Laplacian identity on the plane") {
  // int lap(phi) u dx = int phi dmu for compactly supported smooth phi and
  // atomic mu, with u the logarithmic potential of mu
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  SignedMeasure mu =
      make_atomic(plane_bg(), {{Vec3(0.2, -0.1, 0), 1.3}, {Vec3(-0.3, 0.25, 0), -0.6}});
  for (int trial = 0; trial < 3; ++trial) {
    Vec3 center(c(rng), c(rng), 0);
    double R = 1.4;
    // phi = g(rho), rho = |x-center|^2 / R^2, g = exp(1 - 1/(1 - rho)) inside
    auto g = [](double rho) { return rho >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - rho)); };
    auto gp = [&](double rho) {
      if (rho >= 1.0) return 0.0;
      double d = 1.0 - rho;
      return -std::exp(1.0 - 1.0 / d) / (d * d);
    };
    auto gpp = [&](double rho) {
      if (rho >= 1.0) return 0.0;
      double d = 1.0 - rho;
      return std::exp(1.0 - 1.0 / d) * (1.0 / (d * d * d * d) - 2.0 / (d * d * d));
    };
    auto phi = [&](const Vec3& x) { return g((x - center).head<2>().squaredNorm() / (R * R)); };
    // paper-sign Laplacian of g(|x|^2/R^2): -(4 g' + 4 rho g'')/R^2
    auto lap_phi = [&](const Vec3& x) {
      double rho = (x - center).head<2>().squaredNorm() / (R * R);
      return -(4.0 * gp(rho) + 4.0 * rho * gpp(rho)) / (R * R);
    };
    const int n = 700;
    double span = 2.0 * (R + 0.1);  // window covers the bump support
    double lhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec3 x(center.x() - span / 2 + (i + 0.5) * span / n,
               center.y() - span / 2 + (j + 0.5) * span / n, 0);
        double lp = lap_phi(x);
        if (lp == 0.0) continue;
        lhs += lp * potential(plane_bg(), mu, x) * (span / n) * (span / n);
      }
    double rhs = integrate(mu, phi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(2e-4));
  }
}

TEST_CASE("reproduce_smooth recovers spherical harmonics") {
  std::mt19937_64 rng(47);
  // degree 1: lap u = 2u; degree 2: lap u = 6u (paper sign)
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 a = random_unit(rng);
    Vec3 x = random_unit(rng);
    auto u1 = [&a](const Vec3& p) { return a.dot(p); };
    auto lap1 = [&u1](const Vec3& p) { return 2.0 * u1(p); };
    CHECK(std::abs(reproduce_smooth(u1, lap1, x) - u1(x)) < 1e-4);

    auto u2 = [](const Vec3& p) { return p.x() * p.y(); };
    auto lap2 = [&u2](const Vec3& p) { return 6.0 * u2(p); };
    CHECK(std::abs(reproduce_smooth(u2, lap2, x) - u2(x)) < 1e-4);
  }
  // constant: mean term only
  auto one = [](const Vec3&) { return 1.0; };
  auto zero = [](const Vec3&) { return 0.0; };
  CHECK(reproduce_smooth(one, zero, Vec3(0, 0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}
