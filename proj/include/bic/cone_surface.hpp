#pragma once

#include "bic/geometry.hpp"
#include "bic/measure.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace bic {

// Triangulated surface with per-edge intrinsic Euclidean lengths: a polyhedral
// (cone) metric. Positions are optional metadata used for visualisation,
// sampling and for measures that live on an embedded copy.
struct ConeSurface {
  int n_vertices = 0;
  Eigen::MatrixX3i faces;        // oriented triples
  Eigen::MatrixX2i edges;        // canonical (lo, hi) pairs, sorted
  Eigen::VectorXd edge_lengths;  // parallel to `edges`
  Eigen::MatrixX3i face_edges;   // edge index opposite each face corner
  Eigen::MatrixX3d positions;    // optional; 0 rows when absent

  bool has_positions() const { return positions.rows() == n_vertices; }

  int edge_index(int u, int v) const;  // -1 if absent
  double length(int u, int v) const;

  // Builds edge arrays from faces; lengths given on canonical pairs.
  static ConeSurface build(int n_vertices, Eigen::MatrixX3i faces,
                           const std::vector<std::pair<std::pair<int, int>, double>>& lengths,
                           Eigen::MatrixX3d positions = Eigen::MatrixX3d());

  // Convenience: lengths derived from embedded positions.
  static ConeSurface from_positions(const Eigen::MatrixX3d& V, const Eigen::MatrixX3i& F);
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Triangle inequalities (strict, margin 1e-12), manifold edges, closedness,
// connectivity, orientability. Empty report means valid.
ValidationReport validate(const ConeSurface& s);

// Interior angle at corner `corner` (0..2) of face `f`, by the law of cosines.
double face_angle(const ConeSurface& s, int f, int corner);

// Total angle around vertex v: sum of incident face angles.
double cone_angle(const ConeSurface& s, int v);

// Angle-defect measure: atom 2*pi - cone_angle(v) at every vertex; zero-mass
// atoms dropped. Carrier defaults to the unit sphere when positions lie on it,
// else a plane chart bounding box.
SignedMeasure curvature_measure(const ConeSurface& s);

int euler_characteristic(const ConeSurface& s);

// All angle defects (indexed by vertex), used by experiment reports.
Eigen::VectorXd angle_defects(const ConeSurface& s);

}  // namespace bic
