// Command-line front end: every pipeline of the library as a batch subcommand
// with file I/O. Exit codes: 0 success, 1 mathematical/admissibility failure,
// 2 I/O or parse failure.

#include "bic/convergence.hpp"
#include "bic/gallery.hpp"
#include "bic/geodesic_graph.hpp"
#include "bic/green.hpp"
#include "bic/io.hpp"
#include "bic/meshes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") std::cout << content;
  else bic::write_file(out_path, content);
}

// accepts either a mesh or a measure file
struct GbInput {
  std::optional<bic::ConeSurface> mesh;
  std::optional<bic::SignedMeasure> measure;
};

GbInput load_gb_input(const std::string& path) {
  std::string text = bic::read_file(path);
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::exception& e) {
    throw bic::IoError(std::string("parse error: ") + e.what());
  }
  GbInput in;
  if (probe.contains("faces")) in.mesh = bic::mesh_from_json(text);
  else if (probe.contains("carrier")) in.measure = bic::measure_from_json(text);
  else throw bic::IoError("input is neither a mesh nor a measure file");
  return in;
}

struct PairSpec {
  std::vector<std::pair<int, int>> indices;
  std::vector<std::pair<bic::Vec3, bic::Vec3>> points;
};

PairSpec load_pairs(const std::string& path) {
  json j;
  try {
    j = json::parse(bic::read_file(path));
  } catch (const json::exception& e) {
    throw bic::IoError(std::string("pairs parse error: ") + e.what());
  }
  PairSpec out;
  for (const auto& entry : j.at("pairs")) {
    if (entry.size() != 2) throw bic::IoError("each pair needs two entries");
    if (entry[0].is_number()) {
      out.indices.push_back({entry[0], entry[1]});
    } else {
      auto pt = [](const json& p) {
        bic::Vec3 v = bic::Vec3::Zero();
        for (size_t k = 0; k < std::min<size_t>(3, p.size()); ++k) v[k] = p[k];
        return v;
      };
      out.points.push_back({pt(entry[0]), pt(entry[1])});
    }
  }
  return out;
}

int cmd_gb_check(const std::string& path, int chi_flag, bool chi_given, double tol,
                 const std::string& cmdline) {
  GbInput in = load_gb_input(path);
  double residual;
  std::ostringstream report;
  report << bic::csv_header(cmdline, 0);
  if (in.mesh) {
    bic::ValidationReport v = bic::validate(*in.mesh);
    if (!v.ok()) {
      for (const auto& p : v.problems) report << "invalid," << p << "\n";
      std::cout << report.str();
      return 1;
    }
    int chi = bic::euler_characteristic(*in.mesh);
    Eigen::VectorXd defects = bic::angle_defects(*in.mesh);
    residual = defects.sum() - bic::kTwoPi * chi;
    report << "quantity,value\n";
    report << "euler_characteristic," << chi << "\n";
    report << "total_defect," << defects.sum() << "\n";
    report << "residual," << residual << "\n";
    report << "defect_min," << defects.minCoeff() << "\n";
    report << "defect_max," << defects.maxCoeff() << "\n";
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%.17g", defects.cwiseAbs().sum());
    report << "defect_abs_sum," << hash << "\n";
  } else {
    int chi = chi_given ? chi_flag
                        : (in.measure->carrier.kind == bic::BackgroundKind::Torus ? 0 : 2);
    residual = bic::gauss_bonnet_residual(*in.measure, chi);
    report << "quantity,value\n";
    report << "euler_characteristic," << chi << "\n";
    report << "total_mass," << bic::total_mass(*in.measure) << "\n";
    report << "residual," << residual << "\n";
  }
  std::cout << report.str();
  return std::abs(residual) < tol ? 0 : 1;
}

int cmd_distance(const std::string& surface_path, const std::string& pairs_path, int level,
                 int steiner, const std::string& out, const std::string& cmdline,
                 uint64_t seed) {
  std::string text = bic::read_file(surface_path);
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::exception& e) {
    throw bic::IoError(std::string("parse error: ") + e.what());
  }
  PairSpec pairs = load_pairs(pairs_path);
  std::vector<bic::DistanceRow> rows;
  bool any_error = false;

  if (probe.contains("faces")) {
    bic::ConeSurface s = bic::mesh_from_json(text);
    bic::GeodesicGraph g = bic::build_geodesic_graph(s, std::max(0, steiner));
    for (auto [p, q] : pairs.indices) {
      double d = bic::shortest_path(g, p, q);
      rows.push_back({p, q, steiner, d, "ok"});
    }
    if (!pairs.points.empty())
      throw bic::IoError("mesh surfaces take vertex-index pairs");
  } else {
    bic::ConformalMetric m = bic::metric_from_json(text);
    bic::DistanceSolver solver(m, level, steiner);
    int idx = 0;
    for (auto& [p, q] : pairs.points) {
      try {
        double d = solver.distance(p, q);
        rows.push_back({idx, idx + 1, level, d, "ok"});
      } catch (const bic::AtInfinityEndpoint&) {
        rows.push_back({idx, idx + 1, level,
                        std::numeric_limits<double>::infinity(), "at-infinity"});
        any_error = true;
      }
      idx += 2;
    }
    if (!pairs.indices.empty())
      throw bic::IoError("metric surfaces take point pairs");
  }
  emit(out, bic::distance_table_csv(rows, cmdline, seed));
  return any_error ? 1 : 0;
}

int cmd_classify(const std::string& measure_path, const std::string& background,
                 const std::string& out, const std::string& cmdline) {
  bic::SignedMeasure omega = bic::measure_from_json(bic::read_file(measure_path));
  bic::Background bg = background == "torus" ? bic::Background::torus() : bic::Background::sphere();
  bic::ConformalMetric metric = bic::classify_construct(bg, omega);
  emit(out, bic::metric_to_json(metric));
  std::cerr << "# " << cmdline << ": metric written\n";
  return 0;
}

int cmd_potential(const std::string& path, int nx, int ny, const std::string& out,
                  const std::string& cmdline, int truncation) {
  std::string text = bic::read_file(path);
  json probe = json::parse(text);
  bic::Background bg;
  std::function<double(const bic::Vec3&)> u;
  if (probe.contains("background")) {
    bic::ConformalMetric m = bic::metric_from_json(text);
    bg = m.background;
    u = [m](const bic::Vec3& p) { return bic::potential_value(m, p); };
  } else {
    bic::SignedMeasure mu = bic::measure_from_json(text);
    bg = mu.carrier;
    u = [bg, mu, truncation](const bic::Vec3& p) { return bic::potential(bg, mu, p, truncation); };
  }
  bic::GridSpec g = bic::GridSpec::for_background(bg, nx);
  g.ny = ny;
  std::string csv = bic::csv_header(cmdline, 0) + "x,y,u\n";
  char buf[96];
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      bic::Vec3 p = g.cell_center(bg, i, j);
      double val;
      try {
        val = u(p);
      } catch (const bic::SingularEvaluation&) {
        val = std::numeric_limits<double>::quiet_NaN();
      }
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", g.x0 + (i + 0.5) * g.dx(),
                    g.y0 + (j + 0.5) * g.dy(), val);
      csv += buf;
    }
  emit(out, csv);
  return 0;
}

int cmd_gallery(const std::string& name, const json& params, const std::string& out_dir,
                const std::string& cmdline) {
  bic::GalleryItem item;
  if (name == "cube") item = bic::make_cube(params.value("a", 1.0));
  else if (name == "can") item = bic::make_can(params.value("r", 1.0), params.value("h", 2.0),
                                               params.value("circle_points", 262144));
  else if (name == "glued_discs")
    item = bic::make_glued_discs(params.value("r", 1.0), params.value("circle_points", 262144));
  else if (name == "cone") item = bic::make_cone(params.value("theta", bic::kPi));
  else if (name == "cusp") item = bic::make_cusp(params.value("a", 1.0));
  else if (name == "hemisphere_cylinder") item = bic::make_hemisphere_cylinder();
  else if (name == "lantern")
    item = bic::make_lantern(params.value("m", 8), params.value("n", 8));
  else if (name == "icosphere") item = bic::make_icosphere(params.value("k", 2));
  else throw bic::IoError("unknown gallery item: " + name);

  fs::create_directories(out_dir);
  std::string base = (fs::path(out_dir) / name).string();
  if (item.surface) bic::write_file(base + "_mesh.json", bic::mesh_to_json(*item.surface));
  if (item.metric) bic::write_file(base + "_metric.json", bic::metric_to_json(*item.metric));
  bic::write_file(base + "_measure.json", bic::measure_to_json(item.analytic_curvature));
  bic::write_file(base + "_references.csv", bic::references_csv(item.references, cmdline, 0));
  std::cout << "wrote " << base << "_{mesh|metric,measure,references}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfaces of bounded integral curvature: measures, metrics, experiments"};
  app.require_subcommand(1);
  std::string cmdline = join_args(argc, argv);

  // gb-check
  auto* gb = app.add_subcommand("gb-check", "Gauss-Bonnet residual of a mesh or measure file");
  std::string gb_path;
  int gb_chi = 2;
  double gb_tol = 1e-9;
  gb->add_option("file", gb_path)->required();
  auto* chi_opt = gb->add_option("--chi", gb_chi, "Euler characteristic for measure inputs");
  gb->add_option("--tol", gb_tol, "residual tolerance");

  // distance
  auto* dist = app.add_subcommand("distance", "distance table for a surface and pair list");
  std::string dist_surface, dist_pairs, dist_out;
  int dist_level = 4, dist_steiner = -1;
  uint64_t dist_seed = 0;
  dist->add_option("surface", dist_surface)->required();
  dist->add_option("pairs", dist_pairs)->required();
  dist->add_option("--level", dist_level, "substrate refinement level");
  dist->add_option("--steiner", dist_steiner, "Steiner points per edge (-1 = default)");
  dist->add_option("--out", dist_out, "output CSV path (default stdout)");
  dist->add_option("--seed", dist_seed);

  // classify
  auto* cls = app.add_subcommand("classify", "construct a metric from a curvature measure");
  std::string cls_measure, cls_background = "sphere", cls_out;
  cls->add_option("measure", cls_measure)->required();
  cls->add_option("--background", cls_background)->check(CLI::IsMember({"sphere", "torus"}));
  cls->add_option("--out", cls_out);

  // potential
  auto* pot = app.add_subcommand("potential", "evaluate the potential u on a grid");
  std::string pot_path, pot_out;
  int pot_nx = 64, pot_ny = 64, pot_trunc = 64;
  pot->add_option("file", pot_path)->required();
  pot->add_option("--nx", pot_nx);
  pot->add_option("--ny", pot_ny);
  pot->add_option("--truncation", pot_trunc);
  pot->add_option("--out", pot_out);

  // converge
  auto* conv = app.add_subcommand("converge", "convergence experiments");
  std::string conv_name, conv_out, conv_mode = "linear", conv_measure, conv_eps = "";
  int conv_kmax = 4, conv_samples = 32, conv_mmax = 32, conv_level = 3, conv_steiner = -1;
  uint64_t conv_seed = 2026;
  conv->add_option("experiment", conv_name, "icosphere | mollify | lantern")->required();
  conv->add_option("--kmax", conv_kmax);
  conv->add_option("--samples", conv_samples);
  conv->add_option("--seed", conv_seed);
  conv->add_option("--mode", conv_mode)->check(CLI::IsMember({"linear", "cubic"}));
  conv->add_option("--mmax", conv_mmax);
  conv->add_option("--measure", conv_measure, "atomic measure file (mollify)");
  conv->add_option("--eps", conv_eps, "comma-separated radii (mollify)");
  conv->add_option("--level", conv_level);
  conv->add_option("--steiner", conv_steiner);
  conv->add_option("--out", conv_out);

  // gallery
  auto* gal = app.add_subcommand("gallery", "export a worked example");
  std::string gal_name, gal_out_dir = ".";
  double gal_a = 1.0, gal_r = 1.0, gal_h = 2.0, gal_theta = bic::kPi, gal_exp = 1.0;
  int gal_m = 8, gal_n = 8, gal_k = 2, gal_circle = 262144;
  gal->add_option("name", gal_name)->required();
  gal->add_option("--a", gal_a, "cube side / cusp exponent");
  gal->add_option("--r", gal_r);
  gal->add_option("--height", gal_h);
  gal->add_option("--theta", gal_theta);
  gal->add_option("--exponent", gal_exp);
  gal->add_option("--m", gal_m);
  gal->add_option("--n", gal_n);
  gal->add_option("--k", gal_k);
  gal->add_option("--circle-points", gal_circle);
  gal->add_option("--out", gal_out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gb) return cmd_gb_check(gb_path, gb_chi, chi_opt->count() > 0, gb_tol, cmdline);
    if (*dist)
      return cmd_distance(dist_surface, dist_pairs, dist_level, dist_steiner, dist_out, cmdline,
                          dist_seed);
    if (*cls) return cmd_classify(cls_measure, cls_background, cls_out, cmdline);
    if (*pot) return cmd_potential(pot_path, pot_nx, pot_ny, pot_out, cmdline, pot_trunc);
    if (*conv) {
      if (conv_name == "icosphere") {
        auto rows = bic::polyhedral_approximation_experiment(
            conv_kmax, conv_samples, conv_seed, conv_steiner < 0 ? 3 : conv_steiner);
        emit(conv_out, bic::icosphere_report_csv(rows, cmdline, conv_seed));
        return 0;
      }
      if (conv_name == "mollify") {
        if (conv_measure.empty()) throw bic::IoError("mollify needs --measure");
        bic::SignedMeasure omega = bic::measure_from_json(bic::read_file(conv_measure));
        std::vector<double> eps;
        if (conv_eps.empty()) {
          for (int k = 3; k <= 7; ++k) eps.push_back(std::pow(0.5, k));
        } else {
          std::stringstream ss(conv_eps);
          std::string tok;
          while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
        }
        auto rows = bic::mollification_experiment(omega, eps, conv_samples, conv_seed,
                                                  conv_level, conv_steiner);
        emit(conv_out, bic::mollification_report_csv(rows, cmdline, conv_seed));
        return 0;
      }
      if (conv_name == "lantern") {
        auto rows = bic::lantern_experiment(conv_mode, conv_mmax);
        emit(conv_out, bic::lantern_report_csv(rows, cmdline, conv_seed));
        return 0;
      }
      throw bic::IoError("unknown experiment: " + conv_name);
    }
    if (*gal) {
      json params;
      params["a"] = gal_name == "cusp" ? gal_exp : gal_a;
      params["r"] = gal_r;
      params["h"] = gal_h;
      params["theta"] = gal_theta;
      params["m"] = gal_m;
      params["n"] = gal_n;
      params["k"] = gal_k;
      params["circle_points"] = gal_circle;
      return cmd_gallery(gal_name, params, gal_out_dir, cmdline);
    }
  } catch (const bic::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bic::MathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
