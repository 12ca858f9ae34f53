#include "bic/conformal.hpp"

#include "bic/meshes.hpp"
#include "bic/parallel.hpp"
#include "bic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace bic {

namespace {

constexpr double kAtomSnapTol = 1e-9;
constexpr double kAtomMassTol = 1e-12;
constexpr double kNearRadius = 1e-3;  // closed-form window around atoms

double grid_bilinear(const GridSpec& g, const Eigen::ArrayXXd& v, bool wrap, double x, double y) {
  double fx = (x - g.x0) / g.dx() - 0.5;
  double fy = (y - g.y0) / g.dy() - 0.5;
  int i0 = static_cast<int>(std::floor(fx));
  int j0 = static_cast<int>(std::floor(fy));
  double tx = fx - i0, ty = fy - j0;
  auto at = [&](int i, int j) {
    if (wrap) {
      i = (i % g.nx + g.nx) % g.nx;
      j = (j % g.ny + g.ny) % g.ny;
    } else {
      i = std::clamp(i, 0, g.nx - 1);
      j = std::clamp(j, 0, g.ny - 1);
    }
    return v(i, j);
  };
  return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) +
         (1 - tx) * ty * at(i0, j0 + 1) + tx * ty * at(i0 + 1, j0 + 1);
}

}  // namespace

double potential_value(const ConformalMetric& m, const Vec3& p) {
  double u = m.potential_shift;
  if (std::holds_alternative<ZeroPotential>(m.potential)) {
    return u;
  } else if (const auto* f = std::get_if<FieldPotential>(&m.potential)) {
    return u + f->fn(p);
  } else if (const auto* g = std::get_if<GridPotential>(&m.potential)) {
    bool wrap = m.background.kind == BackgroundKind::Torus;
    return u + grid_bilinear(g->grid, g->values, wrap, p.x(), p.y());
  } else if (const auto* mp = std::get_if<MeasurePotential>(&m.potential)) {
    // balance was validated when the metric was built
    return u + potential_prevalidated(m.background, mp->mu, p, mp->truncation);
  }
  return u;
}

double conformal_factor(const ConformalMetric& m, const Vec3& p) {
  return std::exp(potential_value(m, p));
}

// --- curvature --------------------------------------------------------------------

namespace {

// -(u_xx + u_yy) on the chart by central differences (order 2 or 4); one-sided
// second-order stencils at plane-chart borders, periodic wrap on the torus.
Eigen::ArrayXXd fd_laplacian(const Eigen::ArrayXXd& u, const GridSpec& g, bool wrap, int order) {
  int nx = g.nx, ny = g.ny;
  if (u.rows() != nx || u.cols() != ny) throw InvalidArgument("potential grid shape mismatch");
  int need = (order == 4) ? 5 : 3;
  if (nx < need || ny < need)
    throw InvalidArgument("grid potential too coarse for the requested stencil");
  double ax = 1.0 / (g.dx() * g.dx()), ay = 1.0 / (g.dy() * g.dy());
  auto at = [&](int i, int j) {
    if (wrap) {
      i = (i % nx + nx) % nx;
      j = (j % ny + ny) % ny;
    }
    return u(i, j);
  };
  Eigen::ArrayXXd lap(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double uxx, uyy;
      bool ix = wrap || (i >= 1 && i + 1 < nx);
      bool ix4 = wrap || (i >= 2 && i + 2 < nx);
      bool jy = wrap || (j >= 1 && j + 1 < ny);
      bool jy4 = wrap || (j >= 2 && j + 2 < ny);
      if (order == 4 && ix4)
        uxx = (-at(i + 2, j) + 16 * at(i + 1, j) - 30 * at(i, j) + 16 * at(i - 1, j) -
               at(i - 2, j)) * ax / 12.0;
      else if (ix)
        uxx = (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) * ax;
      else {
        int s = (i == 0) ? 1 : -1;
        uxx = (2 * at(i, j) - 5 * at(i + s, j) + 4 * at(i + 2 * s, j) - at(i + 3 * s, j)) * ax;
      }
      if (order == 4 && jy4)
        uyy = (-at(i, j + 2) + 16 * at(i, j + 1) - 30 * at(i, j) + 16 * at(i, j - 1) -
               at(i, j - 2)) * ay / 12.0;
      else if (jy)
        uyy = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) * ay;
      else {
        int s = (j == 0) ? 1 : -1;
        uyy = (2 * at(i, j) - 5 * at(i, j + s) + 4 * at(i, j + 2 * s) - at(i, j + 3 * s)) * ay;
      }
      lap(i, j) = -(uxx + uyy);
    }
  return lap;
}

Eigen::ArrayXXd sample_grid(const ConformalMetric& m, const GridSpec& g) {
  Eigen::ArrayXXd u(g.nx, g.ny);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      u(i, j) = potential_value(m, g.cell_center(m.background, i, j));
  return u;
}

}  // namespace

SignedMeasure curvature_of(const ConformalMetric& m) {
  const double Kh = m.background.gauss_curvature();
  if (const auto* mp = std::get_if<MeasurePotential>(&m.potential)) {
    // dw = K_h dA_h + dmu, assembled symbolically
    SignedMeasure w = mp->mu;
    if (Kh != 0.0) {
      if (!w.ac) {
        AcPart ac;
        ac.grid = GridSpec::for_background(m.background);
        w.ac = ac;
      }
      w.ac->const_term += Kh;
    }
    return w;
  }
  if (std::holds_alternative<ZeroPotential>(m.potential) && m.potential_shift == 0.0) {
    SignedMeasure w;
    w.carrier = m.background;
    if (Kh != 0.0) {
      AcPart ac;
      ac.grid = GridSpec::for_background(m.background);
      ac.const_term = Kh;
      w.ac = ac;
    }
    return w;
  }
  // smooth potential: finite differences on the chart
  if (m.background.kind == BackgroundKind::Sphere)
    throw InvalidArgument("finite-difference curvature needs a plane or torus chart");
  bool wrap = m.background.kind == BackgroundKind::Torus;
  GridSpec g = m.fd_grid;
  Eigen::ArrayXXd u;
  if (const auto* gp = std::get_if<GridPotential>(&m.potential)) {
    g = gp->grid;
    u = gp->values + m.potential_shift;
  } else {
    u = sample_grid(m, g);
  }
  Eigen::ArrayXXd lap = fd_laplacian(u, g, wrap, 2);
  GridValuesAc vals;
  vals.values = (Kh + lap) * (-2.0 * u).exp();  // Gauss curvature of the metric
  vals.area_scale = (2.0 * u).exp();
  SignedMeasure w;
  w.carrier = m.background;
  AcPart ac;
  ac.grid = g;
  ac.density = std::move(vals);
  w.ac = ac;
  w.atoms = m.curvature_atoms;
  w.normalize();
  return w;
}

ResidualField liouville_residual(const ConformalMetric& m, const ScalarField& claimed_gauss,
                                 int stencil_order) {
  if (m.background.kind == BackgroundKind::Sphere)
    throw InvalidArgument("liouville_residual needs a plane or torus chart");
  if (stencil_order != 2 && stencil_order != 4)
    throw InvalidArgument("stencil order must be 2 or 4");
  bool wrap = m.background.kind == BackgroundKind::Torus;
  GridSpec g = m.fd_grid;
  Eigen::ArrayXXd u;
  if (const auto* gp = std::get_if<GridPotential>(&m.potential)) {
    g = gp->grid;
    u = gp->values + m.potential_shift;
  } else {
    u = sample_grid(m, g);
  }
  Eigen::ArrayXXd lap = fd_laplacian(u, g, wrap, stencil_order);
  const double Kh = m.background.gauss_curvature();
  int margin = wrap ? 0 : stencil_order / 2;
  ResidualField out;
  out.grid = g;
  out.margin = margin;
  out.values.resize(g.nx - 2 * margin, g.ny - 2 * margin);
  for (int i = margin; i < g.nx - margin; ++i)
    for (int j = margin; j < g.ny - margin; ++j) {
      Vec3 p = g.cell_center(m.background, i, j);
      out.values(i - margin, j - margin) =
          claimed_gauss(p) * std::exp(2.0 * u(i, j)) - Kh - lap(i, j);
    }
  return out;
}

std::vector<FlaggedPoint> at_infinity_points(const ConformalMetric& m) {
  std::vector<FlaggedPoint> out;
  for (const Atom& a : m.curvature_atoms) {
    if (a.mass > kTwoPi + kAtomMassTol)
      out.push_back({a.point, a.mass, false});
    else if (std::abs(a.mass - kTwoPi) <= kAtomMassTol)
      out.push_back({a.point, a.mass, true});
  }
  return out;
}

// --- lengths ----------------------------------------------------------------------

namespace {

// distance from c to the background geodesic segment [a, b] and the parameter
// of the closest approach
std::pair<double, double> point_segment_distance(const Background& bg, const Vec3& a,
                                                 const Vec3& b, const Vec3& c) {
  switch (bg.kind) {
    case BackgroundKind::Plane: {
      Eigen::Vector2d A = a.head<2>(), B = b.head<2>(), C = c.head<2>();
      Eigen::Vector2d ab = B - A;
      double len2 = ab.squaredNorm();
      double t = len2 > 0 ? std::clamp((C - A).dot(ab) / len2, 0.0, 1.0) : 0.0;
      return {(C - (A + t * ab)).norm(), t};
    }
    case BackgroundKind::Torus: {
      double best = 1e300, bt = 0.0;
      Eigen::Vector2d A = a.head<2>();
      Eigen::Vector2d D(wrap_half(b.x() - a.x()), wrap_half(b.y() - a.y()));
      double len2 = D.squaredNorm();
      for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) {
          Eigen::Vector2d C = c.head<2>() + Eigen::Vector2d(sx, sy);
          double t = len2 > 0 ? std::clamp((C - A).dot(D) / len2, 0.0, 1.0) : 0.0;
          double d = (C - (A + t * D)).norm();
          if (d < best) {
            best = d;
            bt = t;
          }
        }
      return {best, bt};
    }
    case BackgroundKind::Sphere: {
      double ang = sphere_angle(a, b);
      if (ang < 1e-14) return {sphere_angle(a, c), 0.0};
      Vec3 n = a.cross(b).normalized();
      Vec3 proj = c - c.dot(n) * n;
      if (proj.norm() < 1e-14) return {0.5 * kPi, 0.0};
      proj.normalize();
      double ta = sphere_angle(a, proj), tb = sphere_angle(proj, b);
      if (std::abs(ta + tb - ang) < 1e-9)
        return {sphere_angle(c, proj), ta / ang};
      double da = sphere_angle(c, a), db = sphere_angle(c, b);
      return da <= db ? std::make_pair(da, 0.0) : std::make_pair(db, 1.0);
    }
  }
  return {1e300, 0.0};
}

struct SegmentAtoms {
  // atoms (mass, parameter) lying on the segment within tolerance
  std::vector<std::pair<double, double>> hits;
};

SegmentAtoms atoms_on_segment(const ConformalMetric& m, const Vec3& a, const Vec3& b) {
  SegmentAtoms out;
  for (const Atom& atom : m.curvature_atoms) {
    auto [d, t] = point_segment_distance(m.background, a, b, atom.point);
    if (d <= kAtomSnapTol) out.hits.push_back({atom.mass, t});
  }
  std::sort(out.hits.begin(), out.hits.end(),
            [](auto& x, auto& y) { return x.second < y.second; });
  return out;
}

// integral of e^u over the background geodesic [a, b], no atoms inside
double regular_arc_integral(const ConformalMetric& m, const Vec3& a, const Vec3& b) {
  double L = m.background.distance(a, b);
  if (L == 0.0) return 0.0;
  const Quadrature& gl = gauss_legendre(8);
  int pieces = std::clamp(static_cast<int>(std::ceil(L / 0.02)), 1, 64);
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    double t0 = double(p) / pieces, t1 = double(p + 1) / pieces;
    acc += gl.integrate(t0, t1, [&](double t) {
      return conformal_factor(m, m.background.geodesic_point(a, b, t));
    });
  }
  return acc * L;
}

// integral of e^u over the geodesic from an atom (at `a`, mass `mass`) to b;
// the model singular part s^beta is integrated in closed form by the
// substitution tau = s^{beta+1}/(beta+1), the bounded remainder by quadrature.
double singular_arc_integral(const ConformalMetric& m, const Vec3& a, const Vec3& b,
                             double mass) {
  if (mass >= kTwoPi - kAtomMassTol)
    throw InfiniteLength("curve through an atom of mass >= 2pi has infinite length");
  double beta = -mass / kTwoPi;
  double L = m.background.distance(a, b);
  if (L == 0.0) return 0.0;
  double h = std::min(kNearRadius, 0.5 * L);

  // near part on [0, h]
  double T = std::pow(h, beta + 1.0) / (beta + 1.0);
  const Quadrature& gl = gauss_legendre(16);
  double near = gl.integrate(0.0, T, [&](double tau) {
    double s = std::pow((beta + 1.0) * tau, 1.0 / (beta + 1.0));
    Vec3 p = m.background.geodesic_point(a, b, s / L);
    double w = potential_value(m, p) - beta * std::log(s);
    return std::exp(w);
  });

  // far part on [h, L], graded toward the atom end where e^u still varies fast
  double far = 0.0;
  if (h < L) {
    far = integrate_graded(h, L, 24, 8, [&](double s) {
      return conformal_factor(m, m.background.geodesic_point(a, b, s / L));
    });
  }
  return near + far;
}

// one background-geodesic segment with optional atoms at either endpoint
double segment_length(const ConformalMetric& m, const Vec3& a, const Vec3& b) {
  SegmentAtoms sa = atoms_on_segment(m, a, b);
  double L = m.background.distance(a, b);
  if (L == 0.0) return 0.0;
  // split at interior atoms
  std::vector<double> cuts = {0.0};
  std::vector<std::optional<double>> cut_mass = {std::nullopt};
  std::optional<double> mass_a, mass_b;
  for (auto& [mass, t] : sa.hits) {
    if (t * L <= kAtomSnapTol) mass_a = mass;
    else if ((1.0 - t) * L <= kAtomSnapTol) mass_b = mass;
    else {
      cuts.push_back(t);
      cut_mass.push_back(mass);
    }
  }
  cuts.push_back(1.0);
  cut_mass.push_back(std::nullopt);
  double acc = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    Vec3 p = m.background.geodesic_point(a, b, cuts[k]);
    Vec3 q = m.background.geodesic_point(a, b, cuts[k + 1]);
    std::optional<double> m0 = (k == 0) ? mass_a : cut_mass[k];
    std::optional<double> m1 = (k + 2 == cuts.size()) ? mass_b : cut_mass[k + 1];
    if ((m0 && *m0 >= kTwoPi - kAtomMassTol) || (m1 && *m1 >= kTwoPi - kAtomMassTol))
      throw InfiniteLength("curve through an atom of mass >= 2pi has infinite length");
    if (m0 && m1) {
      Vec3 mid = m.background.geodesic_point(p, q, 0.5);
      acc += singular_arc_integral(m, p, mid, *m0) + singular_arc_integral(m, q, mid, *m1);
    } else if (m0) {
      acc += singular_arc_integral(m, p, q, *m0);
    } else if (m1) {
      acc += singular_arc_integral(m, q, p, *m1);
    } else {
      acc += regular_arc_integral(m, p, q);
    }
  }
  return acc;
}

}  // namespace

double length(const ConformalMetric& m, const Eigen::MatrixX3d& polyline) {
  if (polyline.rows() < 2) return 0.0;
  double acc = 0.0;
  for (int i = 0; i + 1 < polyline.rows(); ++i)
    acc += segment_length(m, polyline.row(i), polyline.row(i + 1));
  return acc * m.scale;
}

// --- distance solver ---------------------------------------------------------------

namespace {

ConeSurface substrate_for(const ConformalMetric& m, int level) {
  switch (m.background.kind) {
    case BackgroundKind::Sphere: return icosphere_mesh(level);
    case BackgroundKind::Torus: return torus_grid_mesh(8 << level);
    case BackgroundKind::Plane: {
      if (!m.background.domain) throw InvalidArgument("plane metric needs a declared domain");
      const PlaneDomain& d = *m.background.domain;
      Vec3 center(0.5 * (d.x0 + d.x1), 0.5 * (d.y0 + d.y1), 0.0);
      double R = 0.5 * std::min(d.width(), d.height());
      int sectors = 12 << level;
      int rings = 6 << level;
      return disc_polar_mesh(R, rings, sectors, center);
    }
  }
  throw InvalidArgument("unsupported background");
}

int default_steiner(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::Sphere: return 4;
    case BackgroundKind::Torus: return 2;
    case BackgroundKind::Plane: return 1;
  }
  return 1;
}

}  // namespace

DistanceSolver::DistanceSolver(const ConformalMetric& m, int level, int steiner)
    : metric_(m), level_(level) {
  if (steiner < 0) steiner = default_steiner(m.background.kind);
  ConeSurface substrate = substrate_for(m, level);
  const Background& bg = m.background;
  const auto& atoms = metric_.curvature_atoms;

  auto arc_weight = [this, &bg, &atoms](const Vec3& a, const Vec3& b) -> double {
    double L = bg.distance(a, b);
    if (L == 0.0) return 0.0;
    const Atom* atom_a = nullptr;
    const Atom* atom_b = nullptr;
    for (const Atom& at : atoms) {
      if (bg.distance(a, at.point) <= kAtomSnapTol) atom_a = &at;
      if (bg.distance(b, at.point) <= kAtomSnapTol) atom_b = &at;
    }
    auto singular = [&](const Vec3& from, const Vec3& to, double mass) -> double {
      if (mass >= kTwoPi - kAtomMassTol) return std::numeric_limits<double>::infinity();
      return singular_arc_integral(metric_, from, to, mass);
    };
    if (atom_a && atom_b) {
      Vec3 mid = bg.geodesic_point(a, b, 0.5);
      return singular(a, mid, atom_a->mass) + singular(b, mid, atom_b->mass);
    }
    if (atom_a) return singular(a, b, atom_a->mass);
    if (atom_b) return singular(b, a, atom_b->mass);
    // near an atom the factor varies too fast across one arc for the midpoint
    // rule; paths would cut corners on underestimated weights
    double atom_dist = std::numeric_limits<double>::infinity();
    for (const Atom& at : atoms)
      atom_dist = std::min(atom_dist, point_segment_distance(bg, a, b, at.point).first);
    if (atom_dist < 4.0 * L) {
      int pieces = std::clamp(static_cast<int>(std::ceil(8.0 * L / atom_dist)), 2, 32);
      const Quadrature& gl = gauss_legendre(8);
      double acc = 0.0;
      for (int p = 0; p < pieces; ++p) {
        acc += gl.integrate(double(p) / pieces, double(p + 1) / pieces, [&](double t) {
          return std::exp(potential_value(metric_, bg.geodesic_point(a, b, t)));
        });
      }
      return L * acc;
    }
    Vec3 mid = bg.geodesic_point(a, b, 0.5);
    return L * std::exp(potential_value(metric_, mid));
  };

  graph_ = build_weighted_graph(substrate, bg, steiner, arc_weight);
}

void DistanceSolver::check_endpoint(const Vec3& p) const {
  for (const Atom& a : metric_.curvature_atoms) {
    if (a.mass >= kTwoPi - kAtomMassTol &&
        metric_.background.distance(p, a.point) <= kAtomSnapTol) {
      throw AtInfinityEndpoint(
          a.mass > kTwoPi + kAtomMassTol
              ? "endpoint is a point at infinity (atom mass > 2pi)"
              : "endpoint atom has mass 2pi; finiteness is undecided, query refused");
    }
  }
}

int DistanceSolver::snap(const Vec3& p) const {
  return graph_.nearest_node(p, metric_.background);
}

double DistanceSolver::node_distance(int a, int b) const {
  if (a == b) return 0.0;
  return shortest_path(graph_, a, b) * metric_.scale;
}

double DistanceSolver::distance(const Vec3& p, const Vec3& q) const {
  check_endpoint(p);
  check_endpoint(q);
  return node_distance(snap(p), snap(q));
}

Eigen::MatrixXd DistanceSolver::table(const Eigen::MatrixX3d& points) const {
  int n = static_cast<int>(points.rows());
  std::vector<int> node(n);
  for (int i = 0; i < n; ++i) {
    check_endpoint(points.row(i));
    node[i] = snap(points.row(i));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  parallel_for(n, [&](int i) {
    Eigen::VectorXd d = shortest_paths(graph_, node[i]);
    for (int j = 0; j < n; ++j) out(i, j) = (node[j] == node[i]) ? 0.0 : d[node[j]] * metric_.scale;
  });
  // enforce exact symmetry (paths are symmetric; roundoff is not)
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

double distance(const ConformalMetric& m, const Vec3& p, const Vec3& q, int level) {
  return DistanceSolver(m, level).distance(p, q);
}

// --- classification -----------------------------------------------------------------

ConformalMetric classify_construct(const Background& bg, const SignedMeasure& omega) {
  if (!bg.closed())
    throw InvalidArgument("classify_construct needs a closed background (sphere or torus)");
  int chi = bg.kind == BackgroundKind::Sphere ? 2 : 0;
  double residual = gauss_bonnet_residual(omega, chi);
  if (std::abs(residual) > 1e-9)
    throw BalanceViolation("curvature measure violates Gauss-Bonnet: total - 2 pi chi = " +
                           std::to_string(residual));
  for (const Atom& a : omega.atoms)
    if (a.mass >= kTwoPi - kAtomMassTol)
      throw InadmissibleAtom("atom of mass >= 2 pi at (" + std::to_string(a.point.x()) + ", " +
                                 std::to_string(a.point.y()) + ", " + std::to_string(a.point.z()) +
                                 ")",
                             a.point);

  SignedMeasure mu = omega;
  mu.carrier = bg;
  double Kh = bg.gauss_curvature();
  if (Kh != 0.0) {
    if (!mu.ac) {
      AcPart ac;
      ac.grid = GridSpec::for_background(bg);
      mu.ac = ac;
    }
    mu.ac->const_term -= Kh;
  }
  ConformalMetric m;
  m.background = bg;
  m.potential = MeasurePotential{mu, 64};
  m.curvature_atoms = mu.atoms;
  m.fd_grid = GridSpec::for_background(bg);
  return m;
}

ConformalMetric football_metric(double theta) {
  if (!(theta > 0.0) || theta >= 2.0 * kTwoPi)
    throw InvalidArgument("football angle must lie in (0, 4pi)");
  double alpha = theta / kTwoPi;
  ConformalMetric m;
  m.background = Background::sphere();
  // r = tan(d/2) with d the angle from the south pole;
  // e^{2u} = alpha^2 r^{2(alpha-1)} (1+r^2)^2 / (1+r^{2 alpha})^2.
  // The atan2 form stays accurate all the way to the poles.
  double la = std::log(alpha);
  FieldPotential f;
  f.fn = [alpha, la](const Vec3& p) {
    double d = std::atan2(std::hypot(p.x(), p.y()), -p.z());
    double t = std::tan(0.5 * d);
    return la + (alpha - 1.0) * std::log(t) + std::log1p(t * t) -
           std::log1p(std::pow(t, 2.0 * alpha));
  };
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "log(%.17g) + (%.17g-1)*log(tan(atan2(hypot(x,y),-z)/2)) + "
                "log(1+tan(atan2(hypot(x,y),-z)/2)^2) - "
                "log(1+tan(atan2(hypot(x,y),-z)/2)^(2*%.17g))",
                alpha, alpha, alpha);
  f.descriptor = buf;
  m.potential = std::move(f);
  double mass = kTwoPi - theta;
  if (mass != 0.0) {
    m.curvature_atoms.push_back({Vec3(0, 0, -1), mass});
    m.curvature_atoms.push_back({Vec3(0, 0, 1), mass});
  }
  return m;
}

}  // namespace bic
