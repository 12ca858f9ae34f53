#pragma once

#include "bic/geodesic_graph.hpp"
#include "bic/geometry.hpp"
#include "bic/green.hpp"
#include "bic/measure.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace bic {

// --- the metric -----------------------------------------------------------------

struct ZeroPotential {};

// Closed-form potential. Plane/torus fields see variables (x, y, r) with
// r = hypot(x, y); sphere fields see the embedded coordinates (x, y, z).
struct FieldPotential {
  ScalarField fn;
  std::string descriptor;
};

// Potential sampled at the cell midpoints of a grid (plane and torus charts);
// evaluated elsewhere by bilinear interpolation.
struct GridPotential {
  GridSpec grid;
  Eigen::ArrayXXd values;  // nx x ny
};

// u = potential of a balanced measure through the background's Green kernel.
struct MeasurePotential {
  SignedMeasure mu;
  int truncation = 64;  // torus kernel parameter
};

using PotentialSpec = std::variant<ZeroPotential, FieldPotential, GridPotential, MeasurePotential>;

// Conformal (subharmonic) metric e^{2u} x background. `scale` is a global
// homothety on distances and lengths; `potential_shift` adds a constant to u.
struct ConformalMetric {
  Background background;
  PotentialSpec potential;
  double scale = 1.0;
  double potential_shift = 0.0;
  std::vector<Atom> curvature_atoms;  // atoms of the curvature measure
  GridSpec fd_grid;                   // grid used to discretise smooth potentials

  ConformalMetric() { fd_grid = GridSpec{}; }
};

// u(p) including the shift (but not the homothety scale).
double potential_value(const ConformalMetric& m, const Vec3& p);

// e^{u(p)}
double conformal_factor(const ConformalMetric& m, const Vec3& p);

// --- curvature -------------------------------------------------------------------

// Curvature measure of the metric:
//  - measure potentials: K_h dA_h + mu, assembled symbolically;
//  - smooth (field/grid) potentials on plane or torus charts: the ac measure
//    whose density is the Gauss curvature (K_h + lap u) e^{-2u} obtained by
//    central finite differences, carried with the own-area weight e^{2u}.
SignedMeasure curvature_of(const ConformalMetric& m);

// Pointwise residual  K e^{2u} - K_h - lap_h u  of a claimed Gauss curvature
// field against the finite-difference Laplacian (stencil order 2 or 4).
// Values cover the interior cells; `margin` rows/columns at each border are
// excluded from the arrays.
struct ResidualField {
  Eigen::ArrayXXd values;
  GridSpec grid;
  int margin = 1;
  double max_abs() const { return values.abs().maxCoeff(); }
};
ResidualField liouville_residual(const ConformalMetric& m, const ScalarField& claimed_gauss,
                                 int stencil_order = 2);

struct FlaggedPoint {
  Vec3 point;
  double mass;
  bool indeterminate;  // mass == 2pi: finiteness undecided
};
// Atoms with mass > 2pi, plus mass == 2pi flagged indeterminate.
std::vector<FlaggedPoint> at_infinity_points(const ConformalMetric& m);

// --- lengths and distances --------------------------------------------------------

// Metric length of a polyline (vertices joined by background geodesics).
// Segment endpoints may sit at atoms of mass < 2pi: the singular part is
// integrated in closed form through the model u ~ -(mass/2pi) log r.
// A polyline through an atom of mass >= 2pi raises InfiniteLength.
double length(const ConformalMetric& m, const Eigen::MatrixX3d& polyline);

// Steiner-refined graph over a background triangulation with conformally
// weighted arcs; the unit of all distance work on a metric.
class DistanceSolver {
 public:
  // level: substrate refinement (sphere: icosphere level; torus: 8*2^level
  // grid; plane: polar disc mesh of the domain). steiner < 0 picks a
  // background-dependent default.
  DistanceSolver(const ConformalMetric& m, int level, int steiner = -1);

  const GeodesicGraph& graph() const { return graph_; }
  int node_count() const { return graph_.n_nodes(); }
  int level() const { return level_; }

  // Snaps to nearest nodes. Throws AtInfinityEndpoint if an endpoint sits on
  // an atom of mass >= 2pi (indeterminate points are refused as well).
  double distance(const Vec3& p, const Vec3& q) const;

  // Pairwise distances between snapped sample points (parallel over sources).
  Eigen::MatrixXd table(const Eigen::MatrixX3d& points) const;

  int snap(const Vec3& p) const;
  double node_distance(int a, int b) const;

 private:
  ConformalMetric metric_;
  int level_;
  GeodesicGraph graph_;
  void check_endpoint(const Vec3& p) const;
};

// Convenience single-pair query (builds a solver per call).
double distance(const ConformalMetric& m, const Vec3& p, const Vec3& q, int level);

// --- classification ----------------------------------------------------------------

// Constructive direction of the classification theorem: given an admissible
// measure omega on a closed background (total mass 2 pi chi, all atoms < 2 pi),
// returns the metric with potential u = potential of (omega - K_h dA_h).
// Throws BalanceViolation / InadmissibleAtom on inadmissible input.
ConformalMetric classify_construct(const Background& bg, const SignedMeasure& omega);

// Constant-curvature football: two antipodal cone points of angle theta on
// the unit sphere, given by its closed-form conformal factor. The geodesic
// between the cone points has length pi.
ConformalMetric football_metric(double theta);

}  // namespace bic
