#include "bic/green.hpp"

#include "bic/quadrature.hpp"

#include <cmath>
#include <complex>

namespace bic {

double log_kernel(const Vec3& z, const Vec3& zeta) {
  double d = (z - zeta).head<2>().norm();
  if (d == 0.0) throw SingularEvaluation("log_kernel at coincident points");
  return -std::log(d) / kTwoPi;
}

double green_sphere(const Vec3& x, const Vec3& y) {
  double d = sphere_angle(x, y);
  if (d == 0.0) throw SingularEvaluation("green_sphere at coincident points");
  return -std::log(std::sin(0.5 * d)) / kTwoPi + kSphereGreenConstant;
}

namespace {

// |theta_1(w, q = e^{-pi})| for complex w; terms decay like e^{-pi n(n+1)}.
double theta1_abs(std::complex<double> w, int terms) {
  const double q = std::exp(-kPi);
  std::complex<double> s(0.0, 0.0);
  double sign = 1.0;
  for (int n = 0; n < terms; ++n) {
    double coef = std::pow(q, n * (n + 1));
    s += sign * coef * std::sin(double(2 * n + 1) * w);
    sign = -sign;
  }
  return std::abs(2.0 * std::pow(q, 0.25) * s);
}

double torus_green_constant() {
  // -1/24 + (1/2pi) sum log(1 - e^{-2 pi n})
  static const double c = [] {
    double s = 0.0;
    for (int n = 1; n < 12; ++n) s += std::log1p(-std::exp(-kTwoPi * n));
    return -1.0 / 24.0 + s / kTwoPi;
  }();
  return c;
}

}  // namespace

double green_torus(const Vec3& x, const Vec3& y, int truncation) {
  if (truncation < 1) throw InvalidArgument("green_torus truncation must be >= 1");
  double dx = wrap_half(x.x() - y.x());
  double dy = wrap_half(x.y() - y.y());
  if (dx == 0.0 && dy == 0.0) throw SingularEvaluation("green_torus at coincident points");
  int terms = std::min(truncation, 12);  // converged to double precision by 6
  double th = theta1_abs(std::complex<double>(kPi * dx, kPi * dy), terms);
  return -std::log(th) / kTwoPi + 0.5 * dy * dy + torus_green_constant();
}

double green_torus_fourier(const Vec3& x, const Vec3& y, int truncation) {
  if (truncation < 1) throw InvalidArgument("truncation must be >= 1");
  double dx = wrap_half(x.x() - y.x());
  double dy = wrap_half(x.y() - y.y());
  double acc = 0.0;
  for (int m = -truncation; m <= truncation; ++m)
    for (int n = -truncation; n <= truncation; ++n) {
      if (m == 0 && n == 0) continue;
      double k2 = double(m) * m + double(n) * n;
      acc += std::cos(kTwoPi * (m * dx + n * dy)) / (4.0 * kPi * kPi * k2);
    }
  return acc;
}

double green_kernel(const Background& bg, const Vec3& x, const Vec3& y, int truncation) {
  switch (bg.kind) {
    case BackgroundKind::Plane: return log_kernel(x, y);
    case BackgroundKind::Sphere: return green_sphere(x, y);
    case BackgroundKind::Torus: return green_torus(x, y, truncation);
  }
  return 0.0;
}

double potential_prevalidated(const Background& bg, const SignedMeasure& mu, const Vec3& x,
                              int truncation) {
  for (const Atom& a : mu.atoms)
    if (bg.distance(x, a.point) < 1e-9)
      throw SingularEvaluation("potential evaluated at an atom");

  ScalarField K = [&bg, &x, truncation](const Vec3& y) {
    return green_kernel(bg, x, y, truncation);
  };

  double acc = 0.0;
  for (const Atom& a : mu.atoms) acc += a.mass * K(a.point);

  if (!mu.curves.empty() || mu.ac) {
    SignedMeasure rest;
    rest.carrier = mu.carrier;
    rest.quadrature_order = mu.quadrature_order;
    rest.curves = mu.curves;
    if (mu.ac) {
      AcPart ac = *mu.ac;
      if (ac.const_term != 0.0 && bg.closed()) {
        // a constant density integrates the kernel to exactly zero (zero mean)
        ac.const_term = 0.0;
      }
      bool trivial = ac.const_term == 0.0 && std::holds_alternative<std::monostate>(ac.density);
      if (!trivial) rest.ac = std::move(ac);
    }
    if (!rest.curves.empty() || rest.ac) acc += integrate(rest, K);
  }
  return acc;
}

double potential(const Background& bg, const SignedMeasure& mu, const Vec3& x, int truncation) {
  if (bg.closed()) {
    double total = total_mass(mu);
    if (std::abs(total) > 1e-9)
      throw BalanceViolation("potential on a closed background needs a balanced measure, "
                             "total mass = " + std::to_string(total));
  }
  return potential_prevalidated(bg, mu, x, truncation);
}

double reproduce_smooth(const ScalarField& u, const ScalarField& lap_u, const Vec3& x,
                        int order) {
  Vec3 pole = x.normalized();
  double conv = sphere_integrate(pole, order, [&](const Vec3& y) {
    return green_sphere(pole, y) * lap_u(y);
  });
  double mean = sphere_integrate(pole, order, u) / (4.0 * kPi);
  return conv + mean;
}

}  // namespace bic
