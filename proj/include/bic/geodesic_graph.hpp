#pragma once

#include "bic/cone_surface.hpp"
#include "bic/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace bic {

// Steiner-refined weighted graph used by all distance solvers. Nodes are the
// original vertices followed by Steiner points placed on edges; arcs connect
// nodes that share a face (straight segments inside the unfolded face) plus
// consecutive nodes along every edge.
struct GeodesicGraph {
  int refinement_level = 0;
  int n_mesh_vertices = 0;

  // node i < n_mesh_vertices is mesh vertex i; others are Steiner points
  struct SteinerRef {
    int edge;
    double t;  // parameter from the canonical lower-index endpoint
  };
  std::vector<SteinerRef> steiner;  // indexed by node - n_mesh_vertices
  Eigen::MatrixX3d node_positions;  // 0 rows when the substrate has none

  // CSR adjacency (both directions stored)
  std::vector<int> head;
  std::vector<int> adj;
  std::vector<double> weight;

  int n_nodes() const { return n_mesh_vertices + static_cast<int>(steiner.size()); }
  bool has_positions() const { return node_positions.rows() == n_nodes(); }

  int nearest_node(const Vec3& p, const Background& bg) const;
};

// First n terms of the base-2 van der Corput sequence; the Steiner placement.
// Nested across n, which makes graph distances monotone in the refinement
// level, and asymptotically equidistributed on (0,1).
std::vector<double> van_der_corput(int n);

// Steiner graph of a cone surface. Arc weights come from laying each face out
// flat by the law of cosines.
GeodesicGraph build_geodesic_graph(const ConeSurface& s, int refinement_level);

// Variant for conformal metrics: the substrate carries positions on a
// background geometry and every arc weight is
//   (background arc length between the endpoints) x (conformal factor),
// or a caller-supplied singular integral for arcs incident to atoms.
// arc_weight(a, b) receives node positions and must return the full weight.
GeodesicGraph build_weighted_graph(
    const ConeSurface& substrate, const Background& bg, int steiner_per_edge,
    const std::function<double(const Vec3&, const Vec3&)>& arc_weight);

// Single-source shortest paths (Dijkstra, lowest-node-index tie-break).
Eigen::VectorXd shortest_paths(const GeodesicGraph& g, int source);

// Early-exit single-pair query.
double shortest_path(const GeodesicGraph& g, int source, int target);

// Polyhedral intrinsic distance between two mesh vertices: an upper bound on
// the true distance, monotone non-increasing in refinement_level.
double intrinsic_distance(const ConeSurface& s, int p, int q, int refinement_level);

}  // namespace bic
