#pragma once

#include "bic/conformal.hpp"
#include "bic/measure.hpp"

#include <cstdint>
#include <vector>

namespace bic {

// Sampled point set with pairwise distances; the unit of comparison for
// uniform-distance experiments.
struct DistanceTable {
  Eigen::MatrixX3d sample_points;
  Eigen::MatrixXd values;  // symmetric, zero diagonal
  std::string provenance;
  int level = 0;
};

// Checks symmetry, zero diagonal and the triangle inequality on sampled
// triples (tolerance 1e-9); throws InvalidArgument on failure.
void validate(const DistanceTable& t, uint64_t seed = 1, int triples = 2000);

// max over pairs of |t1 - t2|; a lower bound on the uniform distance D_U.
// Requires identical sample point sets.
double uniform_distance(const DistanceTable& t1, const DistanceTable& t2);

// Seeded low-discrepancy sample on the unit sphere: Fibonacci spiral composed
// with a random rotation drawn from the seed.
Eigen::MatrixX3d sphere_sample(int n, uint64_t seed);

struct IcosphereRow {
  int k;
  int nodes;
  double uniform_lb;
  double weak_lb;
  double total_defect;
};

// For k = 0..k_max compares the icosphere-k graph metric against round-sphere
// distances (uniform_lb) and its defect measure against the round area
// measure (weak_lb). Pass criterion: both columns strictly decreasing.
std::vector<IcosphereRow> polyhedral_approximation_experiment(int k_max, int sample_size,
                                                              uint64_t seed = 2026,
                                                              int steiner = 3);

struct MollificationRow {
  double eps;
  double sup_diff;
  int sample_size;
  uint64_t seed;
};

// Distance tables of classify_construct(sphere, omega) with atoms mollified
// into uniform geodesic discs of radius eps, compared against the atomic
// metric's table on a sample that avoids atom neighbourhoods.
std::vector<MollificationRow> mollification_experiment(const SignedMeasure& omega,
                                                       const std::vector<double>& eps_list,
                                                       int sample_size, uint64_t seed = 2026,
                                                       int level = 3, int steiner = -1);

struct LanternRow {
  int base;
  int slices;
  int sectors;
  double area;
};

// Lantern area sweep: mode "linear" couples slices = sectors = t; mode
// "cubic" couples slices = t^3, sectors = t (the divergent regime).
std::vector<LanternRow> lantern_experiment(const std::string& mode, int t_max);

}  // namespace bic
