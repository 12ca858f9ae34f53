#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bic/conformal.hpp"
#include "bic/gallery.hpp"
#include "bic/io.hpp"
#include "bic/meshes.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace bic;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  fs::path dir = fs::temp_directory_path() / "bic_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  fs::path out = workdir() / "cli_output.txt";
  std::string cmd = std::string(CLI_BINARY) + " " + args + " > " + out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  if (output) *output = read_file(out.string());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("mesh json round trip") {
  ConeSurface cube = cube_mesh(1.5);
  std::string text = mesh_to_json(cube);
  ConeSurface back = mesh_from_json(text);
  CHECK(back.n_vertices == cube.n_vertices);
  CHECK(back.faces == cube.faces);
  CHECK((back.edge_lengths - cube.edge_lengths).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.has_positions());
  CHECK(mesh_to_json(back) == text);
}

TEST_CASE("measure json round trip covers all part kinds") {
  // atoms + curves + radial ac
  SignedMeasure cusp = make_cusp(1.5).analytic_curvature;
  SignedMeasure back = measure_from_json(measure_to_json(cusp));
  CHECK(back.atoms.size() == cusp.atoms.size());
  CHECK(total_mass(back) == doctest::Approx(total_mass(cusp)).epsilon(1e-12));

  SignedMeasure can = make_can(1.0, 2.0, 2048).analytic_curvature;
  SignedMeasure can_back = measure_from_json(measure_to_json(can));
  CHECK(can_back.curves.size() == 2);
  CHECK(total_mass(can_back) == doctest::Approx(total_mass(can)).epsilon(1e-12));

  // grid ac with area scale
  SignedMeasure grid;
  grid.carrier = Background::torus();
  AcPart ac;
  ac.grid = GridSpec{0, 1, 0, 1, 8, 8};
  GridValuesAc g;
  g.values = Eigen::ArrayXXd::Constant(8, 8, 0.25);
  ac.density = g;
  grid.ac = ac;
  SignedMeasure grid_back = measure_from_json(measure_to_json(grid));
  CHECK(total_mass(grid_back) == doctest::Approx(0.25).epsilon(1e-12));

  // discs
  SignedMeasure discs;
  discs.carrier = Background::sphere();
  AcPart dac;
  dac.grid = GridSpec::for_background(discs.carrier);
  DiscAc d;
  d.discs.push_back({Vec3(0, 0, 1), kPi, 0.1});
  dac.density = d;
  discs.ac = dac;
  SignedMeasure discs_back = measure_from_json(measure_to_json(discs));
  CHECK(total_mass(discs_back) == doctest::Approx(kPi).epsilon(1e-12));

  // expr curve density
  std::string expr_measure = R"({
    "carrier": "plane", "domain": {"x0": -2, "x1": 2, "y0": -2, "y1": 2},
    "atoms": [],
    "curves": [{"polyline": [[0,0],[1,0],[2,0]],
                "density": {"kind": "expr", "expr": "s*s"}}],
    "ac": null })";
  SignedMeasure em = measure_from_json(expr_measure);
  // int_0^2 s^2 ds = 8/3
  CHECK(total_mass(em) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("metric json round trip") {
  for (const GalleryItem& item :
       {make_cone(kPi), make_cusp(2.0), make_glued_discs(1.0), make_hemisphere_cylinder()}) {
    REQUIRE(item.metric.has_value());
    ConformalMetric back = metric_from_json(metric_to_json(*item.metric));
    for (double x : {0.31, 0.72}) {
      Vec3 p(x, -0.2, 0);
      CHECK(potential_value(back, p) ==
            doctest::Approx(potential_value(*item.metric, p)).epsilon(1e-12));
    }
    CHECK(metric_to_json(back) == metric_to_json(*item.metric));
  }

  ConformalMetric football = football_metric(kPi);
  ConformalMetric fb = metric_from_json(metric_to_json(football));
  Vec3 q(0.3, 0.5, -0.81);
  q.normalize();
  CHECK(potential_value(fb, q) == doctest::Approx(potential_value(football, q)).epsilon(1e-12));

  ConformalMetric classified =
      classify_construct(Background::sphere(),
                         make_atomic(Background::sphere(), {{Vec3(0, 0, 1), kPi},
                                                            {Vec3(0, 0, -1), kPi},
                                                            {Vec3(1, 0, 0), kPi},
                                                            {Vec3(-1, 0, 0), kPi}}));
  ConformalMetric cb = metric_from_json(metric_to_json(classified));
  CHECK(potential_value(cb, q) == doctest::Approx(potential_value(classified, q)).epsilon(1e-12));
}

TEST_CASE("malformed json raises IoError") {
  CHECK_THROWS_AS(mesh_from_json("{ not json"), IoError);
  CHECK_THROWS_AS(measure_from_json("{}"), IoError);
  CHECK_THROWS_AS(metric_from_json(R"({"background": "sphere"})"), IoError);
}

TEST_CASE("cli: gb-check") {
  fs::path dir = workdir();
  write_file((dir / "cube.json").string(), mesh_to_json(cube_mesh(1.0)));
  std::string out;
  CHECK(run_cli("gb-check " + (dir / "cube.json").string(), &out) == 0);
  CHECK(out.find("residual,") != std::string::npos);

  // perturbing one edge length changes defects but not the residual
  ConeSurface cube = cube_mesh(1.0);
  cube.edge_lengths[0] *= 1.05;
  write_file((dir / "cube_perturbed.json").string(), mesh_to_json(cube));
  std::string out2;
  CHECK(run_cli("gb-check " + (dir / "cube_perturbed.json").string(), &out2) == 0);
  auto field = [](const std::string& report, const std::string& key) {
    auto pos = report.find(key + ",");
    REQUIRE(pos != std::string::npos);
    return report.substr(pos + key.size() + 1, report.find('\n', pos) - pos - key.size() - 1);
  };
  CHECK(field(out, "defect_max") != field(out2, "defect_max"));
  CHECK(std::abs(std::stod(field(out2, "residual"))) < 1e-9);

  write_file((dir / "broken.json").string(), "{ broken");
  CHECK(run_cli("gb-check " + (dir / "broken.json").string()) == 2);

  // measure input with wrong total mass exits 1
  SignedMeasure short_measure = make_atomic(Background::sphere(), {{Vec3(0, 0, 1), kPi}});
  write_file((dir / "short.json").string(), measure_to_json(short_measure));
  CHECK(run_cli("gb-check " + (dir / "short.json").string() + " --chi 2") == 1);
}

TEST_CASE("cli: classify gate and metric output") {
  fs::path dir = workdir();
  SignedMeasure tetra = make_atomic(Background::sphere(), {{Vec3(0, 0, 1), kPi},
                                                           {Vec3(0, 0, -1), kPi},
                                                           {Vec3(1, 0, 0), kPi},
                                                           {Vec3(-1, 0, 0), kPi}});
  write_file((dir / "tetra.json").string(), measure_to_json(tetra));
  fs::path metric_path = dir / "tetra_metric.json";
  CHECK(run_cli("classify " + (dir / "tetra.json").string() + " --background sphere --out " +
                metric_path.string()) == 0);
  ConformalMetric m = metric_from_json(read_file(metric_path.string()));
  CHECK(m.curvature_atoms.size() == 4);

  SignedMeasure bad_total = make_atomic(Background::sphere(), {{Vec3(0, 0, 1), 3.0 * kPi}});
  write_file((dir / "bad_total.json").string(), measure_to_json(bad_total));
  CHECK(run_cli("classify " + (dir / "bad_total.json").string()) == 1);

  SignedMeasure big_atom =
      make_atomic(Background::sphere(), {{Vec3(0, 0, 1), 2.5 * kPi}, {Vec3(0, 0, -1), 1.5 * kPi}});
  write_file((dir / "big_atom.json").string(), measure_to_json(big_atom));
  CHECK(run_cli("classify " + (dir / "big_atom.json").string()) == 1);
}

TEST_CASE("cli: distance on a mesh and on a metric") {
  fs::path dir = workdir();
  write_file((dir / "tet.json").string(), mesh_to_json(icosphere_mesh(0)));
  write_file((dir / "vpairs.json").string(), R"({"pairs": [[0, 1], [2, 7]]})");
  std::string out;
  CHECK(run_cli("distance " + (dir / "tet.json").string() + " " + (dir / "vpairs.json").string() +
                    " --steiner 2",
                &out) == 0);
  CHECK(out.find("p,q,level,distance,status") != std::string::npos);
  CHECK(out.find("ok") != std::string::npos);

  // cusp metric: a pair through the origin produces an error row and exit 1
  GalleryItem cusp = make_cusp(1.0);
  write_file((dir / "cusp.json").string(), metric_to_json(*cusp.metric));
  write_file((dir / "ppairs.json").string(),
             R"({"pairs": [[[0.0, 0.0], [0.5, 0.0]], [[0.3, 0.0], [0.0, 0.3]]]})");
  std::string out2;
  CHECK(run_cli("distance " + (dir / "cusp.json").string() + " " + (dir / "ppairs.json").string() +
                    " --level 3",
                &out2) == 1);
  CHECK(out2.find("at-infinity") != std::string::npos);
  CHECK(out2.find("ok") != std::string::npos);
}

TEST_CASE("cli: gallery export writes three files") {
  fs::path dir = workdir() / "gallery_out";
  fs::remove_all(dir);
  CHECK(run_cli("gallery cube --a 1 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "cube_mesh.json"));
  CHECK(fs::exists(dir / "cube_measure.json"));
  CHECK(fs::exists(dir / "cube_references.csv"));

  CHECK(run_cli("gallery cone --theta 3.14159 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "cone_metric.json"));
  CHECK(run_cli("gallery nosuch --out " + dir.string()) == 2);
}

TEST_CASE("cli: converge lantern and idempotence") {
  fs::path dir = workdir();
  fs::path a = dir / "lant_a.csv", b = dir / "lant_b.csv";
  CHECK(run_cli("converge lantern --mode cubic --mmax 12 --out " + a.string()) == 0);
  CHECK(run_cli("converge lantern --mode cubic --mmax 12 --out " + b.string()) == 0);
  std::string ca = read_file(a.string()), cb = read_file(b.string());
  CHECK(ca == cb);  // identical inputs, identical bytes
  CHECK(ca.find("# bic ") == 0);
  CHECK(ca.find("m,slices,sectors,area") != std::string::npos);
  bool crossed = false;
  std::istringstream ss(ca);
  std::string line;
  while (std::getline(ss, line)) {
    auto last = line.rfind(',');
    if (last == std::string::npos || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    crossed |= std::stod(line.substr(last + 1)) > 10.0;
  }
  CHECK(crossed);
}

TEST_CASE("cli: potential grid evaluation") {
  fs::path dir = workdir();
  GalleryItem cone = make_cone(kPi);
  write_file((dir / "cone_metric.json").string(), metric_to_json(*cone.metric));
  std::string out;
  CHECK(run_cli("potential " + (dir / "cone_metric.json").string() + " --nx 8 --ny 8", &out) == 0);
  CHECK(out.find("x,y,u") != std::string::npos);
}
