#include "bic/measure.hpp"

#include "bic/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bic {

namespace {

constexpr double kAtomMergeTol = 1e-12;

double disc_area_on(const Background& bg, double radius) {
  // geodesic disc area
  if (bg.kind == BackgroundKind::Sphere) return kTwoPi * (1.0 - std::cos(radius));
  return kPi * radius * radius;
}

// Geodesic polar quadrature over a disc: fn(point) integrated against dA.
double disc_integrate(const Background& bg, const Vec3& center, double radius, int nr, int nphi,
                      const std::function<double(const Vec3&)>& fn) {
  const Quadrature& qr = gauss_legendre(nr);
  double acc = 0.0;
  if (bg.kind == BackgroundKind::Sphere) {
    Vec3 t1, t2;
    tangent_frame(center, t1, t2);
    for (int i = 0; i < qr.nodes.size(); ++i) {
      double d = radius * qr.nodes[i];
      double w = radius * qr.weights[i] * std::sin(d);
      for (int j = 0; j < nphi; ++j) {
        double phi = kTwoPi * (j + 0.5) / nphi;
        Vec3 y = std::cos(d) * center + std::sin(d) * (std::cos(phi) * t1 + std::sin(phi) * t2);
        acc += w * fn(y) * (kTwoPi / nphi);
      }
    }
    return acc;
  }
  for (int i = 0; i < qr.nodes.size(); ++i) {
    double r = radius * qr.nodes[i];
    double w = radius * qr.weights[i] * r;
    for (int j = 0; j < nphi; ++j) {
      double phi = kTwoPi * (j + 0.5) / nphi;
      Vec3 y = center + Vec3(r * std::cos(phi), r * std::sin(phi), 0.0);
      if (bg.kind == BackgroundKind::Torus) y = torus_canonical(y);
      acc += w * fn(y) * (kTwoPi / nphi);
    }
  }
  return acc;
}

}  // namespace

double CurvePart::length() const {
  double acc = 0.0;
  for (int i = 0; i + 1 < polyline.rows(); ++i)
    acc += (polyline.row(i + 1) - polyline.row(i)).norm();
  return acc;
}

GridSpec GridSpec::for_background(const Background& bg, int n) {
  GridSpec g;
  g.nx = n;
  g.ny = n;
  switch (bg.kind) {
    case BackgroundKind::Sphere:
      g.x0 = 0; g.x1 = kTwoPi; g.y0 = 0; g.y1 = kPi;
      break;
    case BackgroundKind::Torus:
      g.x0 = 0; g.x1 = 1; g.y0 = 0; g.y1 = 1;
      break;
    case BackgroundKind::Plane: {
      if (!bg.domain) throw InvalidArgument("plane background needs a declared domain");
      g.x0 = bg.domain->x0; g.x1 = bg.domain->x1;
      g.y0 = bg.domain->y0; g.y1 = bg.domain->y1;
      break;
    }
  }
  return g;
}

Vec3 GridSpec::cell_center(const Background& bg, int i, int j) const {
  double x = x0 + (i + 0.5) * dx();
  double y = y0 + (j + 0.5) * dy();
  if (bg.kind == BackgroundKind::Sphere) {
    // (x, y) = (azimuth, polar angle)
    return Vec3(std::sin(y) * std::cos(x), std::sin(y) * std::sin(x), std::cos(y));
  }
  return Vec3(x, y, 0.0);
}

double GridSpec::cell_area(const Background& bg, int /*i*/, int j) const {
  if (bg.kind == BackgroundKind::Sphere) {
    double th0 = y0 + j * dy();
    double th1 = th0 + dy();
    return dx() * (std::cos(th0) - std::cos(th1));
  }
  return dx() * dy();
}

void SignedMeasure::normalize() {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.point.x() != b.point.x()) return a.point.x() < b.point.x();
    if (a.point.y() != b.point.y()) return a.point.y() < b.point.y();
    return a.point.z() < b.point.z();
  });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    bool absorbed = false;
    // only nearby-in-x candidates can be within the merge tolerance
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (a.point.x() - it->point.x() > kAtomMergeTol) break;
      if ((a.point - it->point).norm() <= kAtomMergeTol) {
        it->mass += a.mass;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(a);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Atom& a) { return a.mass == 0.0; }),
               merged.end());
  atoms = std::move(merged);
}

SignedMeasure make_atomic(const Background& carrier, std::vector<Atom> atoms) {
  SignedMeasure mu;
  mu.carrier = carrier;
  mu.atoms = std::move(atoms);
  mu.normalize();
  return mu;
}

namespace {

double curve_integral(const SignedMeasure& mu, const CurvePart& c,
                      const std::function<double(const Vec3&, double)>& f) {
  // f(point, arclength) integrated against density ds, composite GL per segment
  const Quadrature& gl = gauss_legendre(mu.quadrature_order);
  double acc = 0.0, s0 = 0.0;
  for (int i = 0; i + 1 < c.polyline.rows(); ++i) {
    Vec3 a = c.polyline.row(i), b = c.polyline.row(i + 1);
    double len = (b - a).norm();
    if (len == 0.0) continue;
    for (int q = 0; q < gl.nodes.size(); ++q) {
      double t = gl.nodes[q];
      Vec3 p = a + t * (b - a);
      double s = s0 + t * len;
      acc += gl.weights[q] * len * c.density(s) * f(p, s);
    }
    s0 += len;
  }
  return acc;
}

// integral of density * f over the ac part (f = nullptr means f == 1)
double ac_integral(const SignedMeasure& mu, const AcPart& ac, const ScalarField* f) {
  const Background& bg = mu.carrier;
  double acc = 0.0;

  auto grid_sum = [&](const std::function<double(int, int, const Vec3&)>& cell_density) {
    double s = 0.0;
    for (int i = 0; i < ac.grid.nx; ++i)
      for (int j = 0; j < ac.grid.ny; ++j) {
        Vec3 p = ac.grid.cell_center(bg, i, j);
        double rho = cell_density(i, j, p);
        if (rho == 0.0) continue;
        double a = ac.grid.cell_area(bg, i, j);
        s += rho * (f ? (*f)(p) : 1.0) * a;
      }
    return s;
  };

  if (ac.const_term != 0.0) {
    if (!f && bg.closed()) {
      acc += ac.const_term * bg.area();  // exact, no grid loop
    } else {
      acc += grid_sum([&](int, int, const Vec3&) { return ac.const_term; });
    }
  }

  if (std::holds_alternative<GridValuesAc>(ac.density)) {
    const auto& g = std::get<GridValuesAc>(ac.density);
    if (g.values.rows() != ac.grid.nx || g.values.cols() != ac.grid.ny)
      throw InvalidMeasure("ac grid values shape mismatch");
    bool scaled_area = g.area_scale.size() > 0;
    acc += grid_sum([&](int i, int j, const Vec3&) {
      double v = g.values(i, j);
      return scaled_area ? v * g.area_scale(i, j) : v;
    });
  } else if (std::holds_alternative<FieldAc>(ac.density)) {
    const auto& fd = std::get<FieldAc>(ac.density);
    acc += grid_sum([&](int, int, const Vec3& p) { return fd.fn(p); });
  } else if (std::holds_alternative<RadialAc>(ac.density)) {
    const auto& r = std::get<RadialAc>(ac.density);
    if (bg.kind == BackgroundKind::Sphere)
      throw InvalidMeasure("radial ac parts are for plane charts");
    auto radial = [&](double rr) {
      double v = r.profile(rr);
      if (r.area_scale) v *= r.area_scale(rr);
      if (f) {
        // angular average of f at radius rr
        const int nphi = 64;
        double m = 0.0;
        for (int j = 0; j < nphi; ++j) {
          double phi = kTwoPi * (j + 0.5) / nphi;
          Vec3 p = r.center + Vec3(rr * std::cos(phi), rr * std::sin(phi), 0.0);
          m += (*f)(p);
        }
        v *= m / nphi;
      }
      return v * kTwoPi * rr;
    };
    acc += integrate_graded(0.0, r.rmax, 48, mu.quadrature_order, radial);
  } else if (std::holds_alternative<DiscAc>(ac.density)) {
    const auto& d = std::get<DiscAc>(ac.density);
    for (const auto& disc : d.discs) {
      if (!f) {
        acc += disc.mass;  // uniform density integrates exactly to its mass
      } else {
        double area = disc_area_on(bg, disc.radius);
        acc += disc.mass / area *
               disc_integrate(bg, disc.center, disc.radius, 16, 32,
                              [&](const Vec3& p) { return (*f)(p); });
      }
    }
  }
  return acc;
}

}  // namespace

double total_mass(const SignedMeasure& mu) {
  double acc = 0.0;
  for (const Atom& a : mu.atoms) {
    if (!std::isfinite(a.mass)) throw InvalidMeasure("non-finite atom mass");
    acc += a.mass;
  }
  for (const CurvePart& c : mu.curves) {
    double v = curve_integral(mu, c, [](const Vec3&, double) { return 1.0; });
    if (!std::isfinite(v)) throw InvalidMeasure("curve density failed to integrate");
    acc += v;
  }
  if (mu.ac) {
    double v = ac_integral(mu, *mu.ac, nullptr);
    if (!std::isfinite(v)) throw InvalidMeasure("ac density failed to integrate");
    acc += v;
  }
  return acc;
}

double gauss_bonnet_residual(const SignedMeasure& mu, int euler_char) {
  return total_mass(mu) - kTwoPi * euler_char;
}

double max_atom(const SignedMeasure& mu) {
  double m = 0.0;
  for (const Atom& a : mu.atoms) m = std::max(m, a.mass);
  return m;
}

double integrate(const SignedMeasure& mu, const ScalarField& f) {
  double acc = 0.0;
  for (const Atom& a : mu.atoms) {
    double v;
    try {
      v = f(a.point);
    } catch (const std::exception& e) {
      throw InvalidArgument(std::string("invalid test function at atom: ") + e.what());
    }
    if (!std::isfinite(v)) throw InvalidArgument("invalid test function at atom (non-finite)");
    acc += a.mass * v;
  }
  for (const CurvePart& c : mu.curves)
    acc += curve_integral(mu, c, [&](const Vec3& p, double) { return f(p); });
  if (mu.ac) acc += ac_integral(mu, *mu.ac, &f);
  return acc;
}

namespace {

AcPart split_ac(const AcPart& ac, bool positive) {
  AcPart out;
  out.grid = ac.grid;
  double sgn = positive ? 1.0 : -1.0;
  // fold const_term into the pointwise split
  double c = ac.const_term;
  if (std::holds_alternative<std::monostate>(ac.density)) {
    out.const_term = std::max(sgn * c, 0.0);
    return out;
  }
  out.const_term = 0.0;
  if (std::holds_alternative<GridValuesAc>(ac.density)) {
    const auto& g = std::get<GridValuesAc>(ac.density);
    GridValuesAc h;
    h.values = (sgn * (g.values + c)).max(0.0);
    h.area_scale = g.area_scale;
    out.density = std::move(h);
  } else if (std::holds_alternative<FieldAc>(ac.density)) {
    const auto& fd = std::get<FieldAc>(ac.density);
    FieldAc h;
    ScalarField base = fd.fn;
    h.fn = [base, c, sgn](const Vec3& p) { return std::max(sgn * (base(p) + c), 0.0); };
    h.descriptor = (positive ? "pos(" : "neg(") + fd.descriptor + ")";
    out.density = std::move(h);
  } else if (std::holds_alternative<RadialAc>(ac.density)) {
    const auto& r = std::get<RadialAc>(ac.density);
    RadialAc h = r;
    RadialProfile base = r.profile;
    h.profile = [base, c, sgn](double rr) { return std::max(sgn * (base(rr) + c), 0.0); };
    h.descriptor = (positive ? "pos(" : "neg(") + r.descriptor + ")";
    out.density = std::move(h);
    // note: const_term outside rmax is dropped only if zero; reject otherwise
    if (c != 0.0) throw InvalidMeasure("jordan_split of radial part with nonzero const term");
  } else if (std::holds_alternative<DiscAc>(ac.density)) {
    const auto& d = std::get<DiscAc>(ac.density);
    if (c != 0.0) throw InvalidMeasure("jordan_split of disc part with nonzero const term");
    DiscAc h;
    for (const auto& disc : d.discs)
      if (sgn * disc.mass > 0.0) h.discs.push_back({disc.center, sgn * disc.mass, disc.radius});
    out.density = std::move(h);
  }
  return out;
}

bool ac_is_trivial(const AcPart& ac) {
  if (ac.const_term != 0.0) return false;
  if (std::holds_alternative<std::monostate>(ac.density)) return true;
  if (std::holds_alternative<DiscAc>(ac.density))
    return std::get<DiscAc>(ac.density).discs.empty();
  return false;
}

}  // namespace

JordanPair jordan_split(const SignedMeasure& mu) {
  JordanPair out;
  out.plus.carrier = out.minus.carrier = mu.carrier;
  out.plus.quadrature_order = out.minus.quadrature_order = mu.quadrature_order;
  for (const Atom& a : mu.atoms) {
    if (a.mass > 0) out.plus.atoms.push_back(a);
    else if (a.mass < 0) out.minus.atoms.push_back({a.point, -a.mass});
  }
  for (const CurvePart& c : mu.curves) {
    if (c.density.is_constant()) {
      if (c.density.constant > 0) out.plus.curves.push_back(c);
      else if (c.density.constant < 0) {
        CurvePart n = c;
        n.density.constant = -c.density.constant;
        out.minus.curves.push_back(std::move(n));
      }
    } else {
      auto base = c.density.fn;
      CurvePart p = c, n = c;
      p.density.fn = [base](double s) { return std::max(base(s), 0.0); };
      p.density.descriptor = "pos(" + c.density.descriptor + ")";
      n.density.fn = [base](double s) { return std::max(-base(s), 0.0); };
      n.density.descriptor = "neg(" + c.density.descriptor + ")";
      out.plus.curves.push_back(std::move(p));
      out.minus.curves.push_back(std::move(n));
    }
  }
  if (mu.ac) {
    AcPart p = split_ac(*mu.ac, true);
    AcPart n = split_ac(*mu.ac, false);
    if (!ac_is_trivial(p)) out.plus.ac = std::move(p);
    if (!ac_is_trivial(n)) out.minus.ac = std::move(n);
  }
  out.plus.normalize();
  out.minus.normalize();
  return out;
}

SignedMeasure scaled(const SignedMeasure& mu, double s) {
  SignedMeasure out = mu;
  for (Atom& a : out.atoms) a.mass *= s;
  for (CurvePart& c : out.curves) {
    if (c.density.is_constant()) {
      c.density.constant *= s;
    } else {
      auto base = c.density.fn;
      c.density.fn = [base, s](double t) { return s * base(t); };
      c.density.descriptor = std::to_string(s) + "*(" + c.density.descriptor + ")";
    }
  }
  if (out.ac) {
    out.ac->const_term *= s;
    if (std::holds_alternative<GridValuesAc>(out.ac->density)) {
      std::get<GridValuesAc>(out.ac->density).values *= s;
    } else if (std::holds_alternative<FieldAc>(out.ac->density)) {
      auto& fd = std::get<FieldAc>(out.ac->density);
      auto base = fd.fn;
      fd.fn = [base, s](const Vec3& p) { return s * base(p); };
      fd.descriptor = std::to_string(s) + "*(" + fd.descriptor + ")";
    } else if (std::holds_alternative<RadialAc>(out.ac->density)) {
      auto& r = std::get<RadialAc>(out.ac->density);
      auto base = r.profile;
      r.profile = [base, s](double rr) { return s * base(rr); };
      r.descriptor = std::to_string(s) + "*(" + r.descriptor + ")";
    } else if (std::holds_alternative<DiscAc>(out.ac->density)) {
      for (auto& d : std::get<DiscAc>(out.ac->density).discs) d.mass *= s;
    }
  }
  out.normalize();
  return out;
}

SignedMeasure sum(const SignedMeasure& a, const SignedMeasure& b) {
  if (a.carrier.kind != b.carrier.kind)
    throw InvalidArgument("cannot add measures on different carriers");
  SignedMeasure out = a;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  out.curves.insert(out.curves.end(), b.curves.begin(), b.curves.end());
  if (b.ac) {
    if (!out.ac) {
      out.ac = b.ac;
    } else if (std::holds_alternative<std::monostate>(out.ac->density)) {
      double c = out.ac->const_term;
      out.ac = b.ac;
      out.ac->const_term += c;
    } else if (std::holds_alternative<std::monostate>(b.ac->density)) {
      out.ac->const_term += b.ac->const_term;
    } else {
      throw InvalidArgument("adding two non-constant ac parts is not supported");
    }
  }
  out.normalize();
  return out;
}

// --- test function machinery ----------------------------------------------------

namespace {

// C^1 bump with Lipschitz constant exactly <= 1 and sup <= radius/1.5.
TestFunction smooth_bump(const Background& bg, const Vec3& center, double radius,
                         const std::string& name) {
  Background carrier = bg;
  double amp = radius / 1.5;
  return {[carrier, center, radius, amp](const Vec3& p) {
            double d = carrier.distance(center, p);
            if (d >= radius) return 0.0;
            double t = 1.0 - d / radius;
            return amp * t * t * (3.0 - 2.0 * t);
          },
          name};
}

std::vector<Vec3> sphere_lattice() {
  // icosahedron vertices in polar orientation
  std::vector<Vec3> pts = {Vec3(0, 0, 1), Vec3(0, 0, -1)};
  double lat = std::atan(0.5);
  for (int i = 0; i < 5; ++i) {
    double a = kTwoPi * i / 5;
    pts.emplace_back(std::cos(a) * std::cos(lat), std::sin(a) * std::cos(lat), std::sin(lat));
    double b = a + kPi / 5;
    pts.emplace_back(std::cos(b) * std::cos(lat), std::sin(b) * std::cos(lat), -std::sin(lat));
  }
  // edge midpoints, projected
  std::vector<Vec3> more = pts;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (sphere_angle(pts[i], pts[j]) < 1.2) more.push_back((pts[i] + pts[j]).normalized());
  return more;
}

}  // namespace

TestFunctionSet TestFunctionSet::default_for(const Background& bg) {
  TestFunctionSet t;
  t.functions.push_back({[](const Vec3&) { return 1.0; }, "one"});
  switch (bg.kind) {
    case BackgroundKind::Sphere: {
      t.functions.push_back({[](const Vec3& p) { return p.x(); }, "x"});
      t.functions.push_back({[](const Vec3& p) { return p.y(); }, "y"});
      t.functions.push_back({[](const Vec3& p) { return p.z(); }, "z"});
      t.functions.push_back({[](const Vec3& p) { return p.x() * p.y(); }, "xy"});
      t.functions.push_back({[](const Vec3& p) { return p.y() * p.z(); }, "yz"});
      t.functions.push_back({[](const Vec3& p) { return p.z() * p.x(); }, "zx"});
      t.functions.push_back(
          {[](const Vec3& p) { return 0.5 * (p.x() * p.x() - p.y() * p.y()); }, "x2-y2"});
      t.functions.push_back(
          {[](const Vec3& p) { return (3.0 * p.z() * p.z() - 1.0) / 6.0; }, "3z2-1"});
      auto centers = sphere_lattice();
      for (double r : {0.35, 0.7, 1.2}) {
        int k = 0;
        for (const Vec3& c : centers)
          t.functions.push_back(smooth_bump(bg, c, r, "bump" + std::to_string(k++)));
      }
      break;
    }
    case BackgroundKind::Torus: {
      for (int freq : {1, 2}) {
        double s = 1.0 / (kTwoPi * freq);
        t.functions.push_back(
            {[freq, s](const Vec3& p) { return s * std::cos(kTwoPi * freq * p.x()); },
             "cosx" + std::to_string(freq)});
        t.functions.push_back(
            {[freq, s](const Vec3& p) { return s * std::sin(kTwoPi * freq * p.x()); },
             "sinx" + std::to_string(freq)});
        t.functions.push_back(
            {[freq, s](const Vec3& p) { return s * std::cos(kTwoPi * freq * p.y()); },
             "cosy" + std::to_string(freq)});
        t.functions.push_back(
            {[freq, s](const Vec3& p) { return s * std::sin(kTwoPi * freq * p.y()); },
             "siny" + std::to_string(freq)});
      }
      for (double r : {0.12, 0.25}) {
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j)
            t.functions.push_back(smooth_bump(bg, Vec3((i + 0.5) / 5.0, (j + 0.5) / 5.0, 0), r,
                                              "bump"));
      }
      break;
    }
    case BackgroundKind::Plane: {
      if (!bg.domain) throw InvalidArgument("plane background needs a declared domain");
      const PlaneDomain& d = *bg.domain;
      double cx = 0.5 * (d.x0 + d.x1), cy = 0.5 * (d.y0 + d.y1);
      double span = std::max(d.width(), d.height());
      t.functions.push_back({[cx](const Vec3& p) { return p.x() - cx; }, "x"});
      t.functions.push_back({[cy](const Vec3& p) { return p.y() - cy; }, "y"});
      double s2 = 1.0 / span;
      t.functions.push_back(
          {[cx, cy, s2](const Vec3& p) { return s2 * (p.x() - cx) * (p.y() - cy); }, "xy"});
      t.functions.push_back({[cx, cy, s2](const Vec3& p) {
                               double u = p.x() - cx, v = p.y() - cy;
                               return 0.5 * s2 * (u * u - v * v);
                             },
                             "x2-y2"});
      for (double r : {span / 8.0, span / 4.0, span / 2.0}) {
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) {
            Vec3 c(d.x0 + (i + 0.5) * d.width() / 5.0, d.y0 + (j + 0.5) * d.height() / 5.0, 0);
            t.functions.push_back(smooth_bump(bg, c, r, "bump"));
          }
      }
      break;
    }
  }
  return t;
}

void TestFunctionSet::enrich(const Background& bg, const std::vector<Vec3>& centers) {
  Background carrier = bg;
  for (const Vec3& c : centers) {
    // signed tent: realizes |f(p)-f(q)| = min(d(p,q), 2) exactly
    functions.push_back({[carrier, c](const Vec3& p) {
                           return std::max(1.0 - carrier.distance(c, p), -1.0);
                         },
                         "tent"});
    for (double r : {0.1, 0.3, 0.8}) functions.push_back(smooth_bump(bg, c, r, "bump"));
  }
}

double weak_distance(const SignedMeasure& mu1, const SignedMeasure& mu2,
                     const TestFunctionSet& tset) {
  if (mu1.carrier.kind != mu2.carrier.kind)
    throw InvalidArgument("weak_distance requires measures on the same carrier");
  if (tset.functions.empty()) throw InvalidArgument("weak_distance with empty test set");
  double best = 0.0;
  for (const TestFunction& f : tset.functions)
    best = std::max(best, std::abs(integrate(mu1, f.fn) - integrate(mu2, f.fn)));
  return best;
}

}  // namespace bic
