#include "bic/convergence.hpp"

#include "bic/gallery.hpp"
#include "bic/geodesic_graph.hpp"
#include "bic/meshes.hpp"
#include "bic/parallel.hpp"

#include <cmath>
#include <random>

namespace bic {

void validate(const DistanceTable& t, uint64_t seed, int triples) {
  int n = static_cast<int>(t.values.rows());
  if (t.values.cols() != n || t.sample_points.rows() != n)
    throw InvalidArgument("distance table shape mismatch");
  for (int i = 0; i < n; ++i) {
    if (t.values(i, i) != 0.0) throw InvalidArgument("distance table diagonal not zero");
    for (int j = i + 1; j < n; ++j)
      if (t.values(i, j) != t.values(j, i))
        throw InvalidArgument("distance table not symmetric");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < triples; ++k) {
    int a = pick(rng), b = pick(rng), c = pick(rng);
    if (t.values(a, c) > t.values(a, b) + t.values(b, c) + 1e-9)
      throw InvalidArgument("distance table violates the triangle inequality");
  }
}

double uniform_distance(const DistanceTable& t1, const DistanceTable& t2) {
  if (t1.sample_points.rows() != t2.sample_points.rows() ||
      (t1.sample_points - t2.sample_points).cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("uniform_distance requires identical sample points");
  return (t1.values - t2.values).cwiseAbs().maxCoeff();
}

Eigen::MatrixX3d sphere_sample(int n, uint64_t seed) {
  // random rotation from the seed
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  Eigen::Quaterniond rot(q[0], q[1], q[2], q[3]);
  Eigen::Matrix3d R = rot.toRotationMatrix();

  const double golden = kPi * (3.0 - std::sqrt(5.0));
  Eigen::MatrixX3d pts(n, 3);
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    pts.row(i) = R * Vec3(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

namespace {

// graph distances between snapped sample points on a positioned surface
DistanceTable graph_table(const ConeSurface& s, const Eigen::MatrixX3d& samples, int steiner,
                          const std::string& provenance, int level_tag) {
  GeodesicGraph g = build_geodesic_graph(s, steiner);
  int n = static_cast<int>(samples.rows());
  Background bg = Background::sphere();
  std::vector<int> node(n);
  for (int i = 0; i < n; ++i) node[i] = g.nearest_node(samples.row(i), bg);
  DistanceTable t;
  t.sample_points = samples;
  t.values = Eigen::MatrixXd::Zero(n, n);
  t.provenance = provenance;
  t.level = level_tag;
  parallel_for(n, [&](int i) {
    Eigen::VectorXd d = shortest_paths(g, node[i]);
    for (int j = 0; j < n; ++j) t.values(i, j) = (node[i] == node[j]) ? 0.0 : d[node[j]];
  });
  t.values = 0.5 * (t.values + t.values.transpose()).eval();
  return t;
}

DistanceTable round_sphere_table(const Eigen::MatrixX3d& samples) {
  int n = static_cast<int>(samples.rows());
  DistanceTable t;
  t.sample_points = samples;
  t.values.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t.values(i, j) = (i == j) ? 0.0 : sphere_angle(samples.row(i), samples.row(j));
  t.values = 0.5 * (t.values + t.values.transpose()).eval();
  t.provenance = "round-sphere";
  return t;
}

SignedMeasure round_area_measure() {
  SignedMeasure mu;
  mu.carrier = Background::sphere();
  AcPart ac;
  ac.grid = GridSpec::for_background(mu.carrier);
  ac.const_term = 1.0;
  mu.ac = ac;
  return mu;
}

}  // namespace

std::vector<IcosphereRow> polyhedral_approximation_experiment(int k_max, int sample_size,
                                                              uint64_t seed, int steiner) {
  if (k_max > 6) throw InvalidArgument("k_max exceeds the node-count budget (6)");
  Eigen::MatrixX3d samples = sphere_sample(sample_size, seed);
  DistanceTable round = round_sphere_table(samples);
  SignedMeasure area = round_area_measure();
  TestFunctionSet tset = TestFunctionSet::default_for(area.carrier);

  std::vector<IcosphereRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    ConeSurface s = icosphere_mesh(k);
    DistanceTable tk = graph_table(s, samples, steiner, "icosphere-" + std::to_string(k), k);
    SignedMeasure defect = curvature_measure(s);
    IcosphereRow row;
    row.k = k;
    row.nodes = s.n_vertices + static_cast<int>(s.edges.rows()) * steiner;
    row.uniform_lb = uniform_distance(tk, round);
    row.weak_lb = weak_distance(defect, area, tset);
    row.total_defect = total_mass(defect);
    rows.push_back(row);
  }
  return rows;
}

std::vector<MollificationRow> mollification_experiment(const SignedMeasure& omega,
                                                       const std::vector<double>& eps_list,
                                                       int sample_size, uint64_t seed, int level,
                                                       int steiner) {
  Background bg = Background::sphere();
  if (max_atom(omega) >= kTwoPi)
    throw InadmissibleAtom("mollification experiment needs atoms < 2 pi", Vec3::Zero());
  double max_eps = 0.0;
  for (double e : eps_list) max_eps = std::max(max_eps, e);

  // sample points that avoid atom neighbourhoods of radius 2 max(eps)
  Eigen::MatrixX3d pool = sphere_sample(4 * sample_size + 64, seed);
  Eigen::MatrixX3d samples(sample_size, 3);
  int got = 0;
  for (int i = 0; i < pool.rows() && got < sample_size; ++i) {
    bool ok = true;
    for (const Atom& a : omega.atoms)
      if (sphere_angle(pool.row(i), a.point) < 2.0 * max_eps) ok = false;
    if (ok) samples.row(got++) = pool.row(i);
  }
  if (got < sample_size)
    throw InvalidArgument("could not place sample points away from the atoms");

  ConformalMetric base = classify_construct(bg, omega);
  DistanceSolver base_solver(base, level, steiner);
  Eigen::MatrixXd base_table = base_solver.table(samples);

  std::vector<MollificationRow> rows;
  for (double eps : eps_list) {
    SignedMeasure mollified = omega;
    mollified.atoms.clear();
    DiscAc discs;
    for (const Atom& a : omega.atoms) discs.discs.push_back({a.point, a.mass, eps});
    AcPart ac;
    if (mollified.ac) ac = *mollified.ac;
    else ac.grid = GridSpec::for_background(bg);
    if (!std::holds_alternative<std::monostate>(ac.density))
      throw InvalidArgument("mollification expects an atomic measure");
    ac.density = std::move(discs);
    mollified.ac = std::move(ac);

    ConformalMetric m = classify_construct(bg, mollified);
    DistanceSolver solver(m, level, steiner);
    Eigen::MatrixXd table = solver.table(samples);
    rows.push_back({eps, (table - base_table).cwiseAbs().maxCoeff(), sample_size, seed});
  }
  return rows;
}

std::vector<LanternRow> lantern_experiment(const std::string& mode, int t_max) {
  bool cubic = mode == "cubic";
  if (!cubic && mode != "linear") throw InvalidArgument("lantern mode must be linear or cubic");
  std::vector<LanternRow> rows;
  for (int t = cubic ? 2 : 3; t <= t_max; ++t) {
    int slices = cubic ? t * t * t : t;
    int sectors = std::max(3, t);
    rows.push_back({t, slices, sectors, lantern_area(slices, sectors)});
  }
  return rows;
}

}  // namespace bic
