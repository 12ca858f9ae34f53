#include "bic/quadrature.hpp"

#include "bic/geometry.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace bic {

namespace {

Quadrature make_gauss_legendre(int n) {
  // Newton iteration on P_n with the asymptotic initial guess; standard
  // Golub-Welsch alternatives are not needed at these orders.
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // map from [-1,1] to [0,1]
    q.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

Quadrature make_tanh_sinh(int n) {
  double h = 4.0 / n;
  std::vector<double> nodes, weights;
  for (int k = -n; k <= n; ++k) {
    double t = k * h;
    double u = 0.5 * kPi * std::sinh(t);
    double x = 0.5 * (1.0 + std::tanh(u));
    // nodes that round to an endpoint carry weight below double resolution
    if (x <= 0.0 || x >= 1.0) continue;
    double w = 0.25 * kPi * h * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    nodes.push_back(x);
    weights.push_back(w);
  }
  Quadrature q;
  q.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), nodes.size());
  q.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
  return q;
}

}  // namespace

const Quadrature& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Quadrature> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const Quadrature& tanh_sinh(int n) {
  static std::mutex mu;
  static std::map<int, Quadrature> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_tanh_sinh(n)).first;
  return it->second;
}

double integrate_graded(double a, double b, int segments, int gl_order,
                        const std::function<double(double)>& f) {
  const Quadrature& gl = gauss_legendre(gl_order);
  // geometric partition refining toward a
  double acc = 0.0;
  double hi = b;
  for (int s = 0; s < segments; ++s) {
    double lo = (s + 1 == segments) ? a : a + (b - a) * std::pow(0.5, s + 1);
    acc += gl.integrate(lo, hi, f);
    hi = lo;
  }
  return acc;
}

double sphere_integrate(const Eigen::Vector3d& pole, int order,
                        const std::function<double(const Eigen::Vector3d&)>& f) {
  Vec3 t1, t2;
  tangent_frame(pole, t1, t2);
  const Quadrature& qt = tanh_sinh(order);
  int nphi = 2 * order;
  double acc = 0.0;
  for (int i = 0; i < qt.nodes.size(); ++i) {
    double t = qt.nodes[i];  // t = (1 - cos d)/2
    double cosd = 1.0 - 2.0 * t;
    double sind = std::sqrt(std::max(0.0, 1.0 - cosd * cosd));
    double ring = 0.0;
    for (int j = 0; j < nphi; ++j) {
      double phi = kTwoPi * (j + 0.5) / nphi;
      Vec3 y = cosd * pole + sind * (std::cos(phi) * t1 + std::sin(phi) * t2);
      ring += f(y);
    }
    // dA = sin d dd dphi and sin d dd = 2 dt
    acc += qt.weights[i] * ring * (kTwoPi / nphi) * 2.0;
  }
  return acc;
}

}  // namespace bic
