#pragma once

#include "bic/cone_surface.hpp"

namespace bic {

// Icosahedral geodesic sphere, polar orientation (vertices at both poles);
// level k has 20*4^k faces, vertices projected to the unit sphere, edge
// lengths = chord lengths.
ConeSurface icosphere_mesh(int level);

// Cube of side a, each square face split by a diagonal. Vertices carry the
// embedded positions.
ConeSurface cube_mesh(double a);

// Schwarz lantern inscribed in the unit cylinder (radius 1, height 1):
// m bands, n vertices per ring with alternating half-step offset. When
// `closed`, the two rims are capped by flat fans so the surface is a sphere.
// The first 2*m*n faces are the lateral triangles.
ConeSurface lantern_mesh(int m, int n, bool closed = true);

// Exact lateral area of the (m, n) lantern by direct triangle summation.
double lantern_area(int m, int n);

// n x n grid triangulation of the flat unit-square torus; positions are chart
// coordinates and edge lengths are flat torus distances.
ConeSurface torus_grid_mesh(int n);

// Polar triangulation of the disc of radius R about `center` in a plane
// chart: `rings` concentric rings of `sectors` nodes plus the center.
ConeSurface disc_polar_mesh(double R, int rings, int sectors,
                            const Vec3& center = Vec3::Zero());

// Intrinsic cone of total angle theta, triangulated to slant radius R and
// capped by a flat fan at the rim so the complex is closed. Purely metric
// (no positions); vertex 0 is the apex.
ConeSurface cone_cap_mesh(double theta, double R, int rings, int sectors);

// Can: cylinder of radius r and height h with flat top and bottom discs,
// triangulated with `sectors` angular and `bands` vertical subdivisions.
ConeSurface can_mesh(double r, double h, int sectors, int bands);

}  // namespace bic
