#pragma once

#include "bic/cone_surface.hpp"
#include "bic/conformal.hpp"
#include "bic/measure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bic {

struct ReferenceValue {
  std::string quantity;
  double value;
  std::string provenance;
};

// A worked example bundled with its analytic curvature measure and reference
// quantities; the oracle set for the other modules.
struct GalleryItem {
  std::string name;
  std::optional<ConeSurface> surface;
  std::optional<ConformalMetric> metric;
  SignedMeasure analytic_curvature;
  std::optional<int> euler_char;  // absent for open charts
  std::vector<ReferenceValue> references;

  double reference(const std::string& quantity) const;
};

// Surface of a cube of side a; 8 atoms of pi/2.
GalleryItem make_cube(double a);

// Euclidean cylinder of radius r and height h with flat top and bottom;
// curvature lives on the two rim circles with density 1/r.
// circle_points controls the polyline resolution of the rims.
GalleryItem make_can(double r, double h, int circle_points = 262144);

// Two Euclidean discs of radius r glued along their boundary.
GalleryItem make_glued_discs(double r, int circle_points = 262144);

// Euclidean cone of total angle theta as the plane metric |z|^{2 beta} |dz|^2
// with beta = theta/(2 pi) - 1; atom (2 pi - theta) at the origin.
GalleryItem make_cone(double theta);

// Cusp metric |dz|^2 / (|z|^2 |log|z||^{2a}) on a disc chart; atom 2 pi at the
// origin plus the negative density -a |log|z||^{2a-2} dA.
GalleryItem make_cusp(double a);

// Half-sphere glued to a half-cylinder, in its plane-chart presentation.
GalleryItem make_hemisphere_cylinder();

// Schwarz lantern inscribed in the unit cylinder: m slices (bands), n sectors
// (vertices per ring), closed up by two flat cap fans.
GalleryItem make_lantern(int m, int n);

// Level-k icosahedral geodesic sphere with chord edge lengths.
GalleryItem make_icosphere(int k);

}  // namespace bic
