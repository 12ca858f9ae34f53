#pragma once

#include "bic/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bic {

using ScalarField = std::function<double(const Vec3&)>;
using RadialProfile = std::function<double(double)>;

// Point mass; `mass` is in radians of angular defect.
struct Atom {
  Vec3 point;
  double mass;
};

// Density along the arclength of a polyline, radians per unit length.
struct CurveDensity {
  double constant = 0.0;                       // used when fn is empty
  std::function<double(double)> fn;            // density(s), s = arclength
  std::string descriptor;                      // serialisable form ("const" or expr text)

  double operator()(double s) const { return fn ? fn(s) : constant; }
  bool is_constant() const { return !fn; }
};

// Curve-supported measure part: polyline + density along arclength.
struct CurvePart {
  Eigen::MatrixX3d polyline;  // ordered points; closed curves repeat the first point
  CurveDensity density;

  double length() const;
  int segments() const { return static_cast<int>(polyline.rows()) - 1; }
};

// Cell-centred quadrature grid on a chart.
// plane: x in [x0,x1], y in [y0,y1], cell area dx*dy
// torus: unit square, cell area 1/(nx*ny)
// sphere: x = azimuth in [0,2pi), y = polar angle in [0,pi]; exact cell areas
struct GridSpec {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  int nx = 256, ny = 256;

  static GridSpec for_background(const Background& bg, int n = 256);

  double dx() const { return (x1 - x0) / nx; }
  double dy() const { return (y1 - y0) / ny; }
  Vec3 cell_center(const Background& bg, int i, int j) const;
  double cell_area(const Background& bg, int i, int j) const;

  bool operator==(const GridSpec& o) const = default;
};

// --- absolutely continuous part, one of several carriers of density ----------

// Densities stored per cell midpoint; `area_scale`, when non-empty, multiplies
// the cell area (used when the density is stated per unit area of the metric
// itself rather than of the background).
struct GridValuesAc {
  Eigen::ArrayXXd values;      // nx x ny
  Eigen::ArrayXXd area_scale;  // empty or nx x ny
};

// Closed-form density evaluated at cell midpoints of the declared grid.
struct FieldAc {
  ScalarField fn;
  std::string descriptor;
};

// Rotationally symmetric density f(|p - center|) supported on r <= rmax
// (plane charts). `area_scale`, when set, multiplies by an own-area factor.
// The descriptors are expressions in r, kept compilable for serialisation.
struct RadialAc {
  Vec3 center = Vec3::Zero();
  RadialProfile profile;
  double rmax = 1.0;
  RadialProfile area_scale;  // optional e^{2u}(r); empty = 1
  std::string descriptor;
  std::string area_scale_descriptor;
};

// Uniform densities on geodesic discs (mollified atoms on closed carriers).
struct DiscAc {
  struct Disc {
    Vec3 center;
    double mass;
    double radius;
  };
  std::vector<Disc> discs;
};

struct AcPart {
  GridSpec grid;           // declared quadrature grid
  double const_term = 0;   // constant density over the whole carrier
  std::variant<std::monostate, GridValuesAc, FieldAc, RadialAc, DiscAc> density;

  bool is_constant() const { return std::holds_alternative<std::monostate>(density); }
};

// --- the measure --------------------------------------------------------------

// Signed Radon measure in three-part normal form: atoms + curve-supported
// parts + absolutely continuous part. Immutable by convention after
// normalize() has run.
struct SignedMeasure {
  Background carrier;
  std::vector<Atom> atoms;
  std::vector<CurvePart> curves;
  std::optional<AcPart> ac;
  int quadrature_order = 8;  // Gauss-Legendre points per polyline segment

  bool empty() const { return atoms.empty() && curves.empty() && !ac; }

  // Merges atoms closer than 1e-12 (carrier units) by summing masses, drops
  // exact-zero atoms, sorts deterministically.
  void normalize();
};

SignedMeasure make_atomic(const Background& carrier, std::vector<Atom> atoms);

// --- operations ----------------------------------------------------------------

double total_mass(const SignedMeasure& mu);

struct JordanPair {
  SignedMeasure plus;
  SignedMeasure minus;
};
JordanPair jordan_split(const SignedMeasure& mu);

double gauss_bonnet_residual(const SignedMeasure& mu, int euler_char);

double integrate(const SignedMeasure& mu, const ScalarField& f);

double max_atom(const SignedMeasure& mu);

// Linear combinations (used by property tests and classify_construct).
SignedMeasure scaled(const SignedMeasure& mu, double s);
SignedMeasure sum(const SignedMeasure& a, const SignedMeasure& b);

// --- bounded-Lipschitz test machinery -------------------------------------------

struct TestFunction {
  ScalarField fn;
  std::string name;
};

// Finite family of fields with Lipschitz constant <= 1 and sup norm <= 1.
struct TestFunctionSet {
  std::vector<TestFunction> functions;

  // Fixed default family for a carrier: constant, low-order polynomial fields
  // and truncated tent bumps on a point lattice, all renormalized.
  static TestFunctionSet default_for(const Background& bg);

  // Adds bumps centered at the given points (several radii each).
  void enrich(const Background& bg, const std::vector<Vec3>& centers);
};

// max_f |int f dmu1 - int f dmu2| over the set; a lower bound on the
// bounded-Lipschitz distance.
double weak_distance(const SignedMeasure& mu1, const SignedMeasure& mu2,
                     const TestFunctionSet& tset);

}  // namespace bic
