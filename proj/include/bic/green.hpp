#pragma once

#include "bic/geometry.hpp"
#include "bic/measure.hpp"

#include <functional>

namespace bic {

// Sign conventions, fixed once for the whole library:
//   Laplacian = -(d^2/dx^2 + d^2/dy^2) in isothermal coordinates,
// and kernels are chosen so that the potential of a measure mu has weak
// Laplacian mu under this sign. The potential of a positive point mass is
// then superharmonic (a peak, not a well).

// -(1/2pi) log |z - zeta| on a plane chart.
double log_kernel(const Vec3& z, const Vec3& zeta);

// Green kernel of the unit round sphere:
//   G(x, y) = -(1/2pi) log sin(d(x,y)/2) + c0,   c0 = -1/(4pi),
// where d is the great-circle distance. c0 is pinned by the zero-mean
// condition int_S G(x, .) dA = 0; the closed form follows from
// int_0^pi log(sin(d/2)) sin(d) dd = -1.
double green_sphere(const Vec3& x, const Vec3& y);

inline constexpr double kSphereGreenConstant = -1.0 / (4.0 * kPi);

// Green kernel of the flat unit-square torus: the zero-mean symmetric kernel
// whose Fourier expansion is sum_{k != 0} e^{2pi i k.(x-y)} / (4 pi^2 |k|^2).
// Evaluated through the exactly-summable Jacobi theta form
//   G = -(1/2pi) log|theta_1(pi(dx + i dy), q=e^{-pi})| + dy^2/2 + C0
// with C0 = -1/24 + (1/2pi) sum_{n>=1} log(1 - e^{-2 pi n}), which enforces
// the zero-mean property exactly. `truncation` caps the number of theta terms;
// values are fully converged from truncation >= 6 onwards.
double green_torus(const Vec3& x, const Vec3& y, int truncation = 64);

// Literal square-truncated partial Fourier sum over max(|m|,|n|) <= truncation.
// Slowly convergent; kept as an independent cross-check of green_torus.
double green_torus_fourier(const Vec3& x, const Vec3& y, int truncation);

// Kernel selected by background kind.
double green_kernel(const Background& bg, const Vec3& x, const Vec3& y, int truncation = 64);

// u(x) = int G(x, y) dmu(y) with the background's kernel.
// Preconditions: on closed backgrounds total_mass(mu) must vanish to 1e-9
// (BalanceViolation otherwise); x must stay 1e-9 away from every atom
// (SingularEvaluation otherwise). Plane potentials omit any harmonic summand:
// the value is exactly the integral against log_kernel.
double potential(const Background& bg, const SignedMeasure& mu, const Vec3& x,
                 int truncation = 64);

// Same integral without re-checking the balance precondition; for callers
// that validated the measure once at construction time.
double potential_prevalidated(const Background& bg, const SignedMeasure& mu, const Vec3& x,
                              int truncation = 64);

// Right-hand side of the smooth recovery identity on the unit sphere,
//   int_S G(x,y) lap_u(y) dA(y) + (1/area) int_S u dA,
// evaluated by singularity-adapted spherical quadrature of the given order.
// Equals u(x) for C^2 u; the test harness for green_sphere.
double reproduce_smooth(const ScalarField& u, const ScalarField& lap_u, const Vec3& x,
                        int order = 64);

}  // namespace bic
