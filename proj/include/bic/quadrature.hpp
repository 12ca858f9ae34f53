#pragma once

#include <Eigen/Dense>

#include <functional>

namespace bic {

// Nodes and weights for integration over [0, 1].
struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }

  // Same rule mapped to [a, b].
  template <class F>
  double integrate(double a, double b, F&& f) const {
    double acc = 0.0;
    for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * f(a + (b - a) * nodes[i]);
    return acc * (b - a);
  }
};

// n-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree 2n-1.
const Quadrature& gauss_legendre(int n);

// Double-exponential (tanh-sinh) rule on (0,1) with 2n+1 nodes. Handles
// endpoint singularities of log and algebraic type to near machine precision.
const Quadrature& tanh_sinh(int n);

// Composite Gauss-Legendre on [a,b] with a geometrically graded partition
// toward a; for integrands with an integrable singularity at a.
double integrate_graded(double a, double b, int segments, int gl_order,
                        const std::function<double(double)>& f);

// Product quadrature over the unit sphere centered at `pole`:
// tanh-sinh in t = (1 - cos d)/2 against uniform midpoints in azimuth.
// Designed so that integrands with a log singularity at `pole` (such as the
// Green kernel) integrate to near machine precision.
double sphere_integrate(const Eigen::Vector3d& pole, int order,
                        const std::function<double(const Eigen::Vector3d&)>& f);

}  // namespace bic
