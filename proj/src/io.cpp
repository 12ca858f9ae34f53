#include "bic/io.hpp"

#include "bic/expr.hpp"
#include "bic/gallery.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bic {

using nlohmann::json;

namespace {

json grid_to_json(const GridSpec& g) {
  return json{{"x0", g.x0}, {"x1", g.x1}, {"y0", g.y0}, {"y1", g.y1}, {"nx", g.nx}, {"ny", g.ny}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.x0 = j.at("x0");
  g.x1 = j.at("x1");
  g.y0 = j.at("y0");
  g.y1 = j.at("y1");
  g.nx = j.at("nx");
  g.ny = j.at("ny");
  return g;
}

json point_to_json(const Vec3& p, bool planar) {
  if (planar) return json::array({p.x(), p.y()});
  return json::array({p.x(), p.y(), p.z()});
}

Vec3 point_from_json(const json& j) {
  Vec3 p = Vec3::Zero();
  for (size_t k = 0; k < std::min<size_t>(3, j.size()); ++k) p[k] = j[k];
  return p;
}

json domain_to_json(const PlaneDomain& d) {
  return json{{"x0", d.x0}, {"x1", d.x1}, {"y0", d.y0}, {"y1", d.y1}};
}

PlaneDomain domain_from_json(const json& j) {
  return PlaneDomain{j.at("x0"), j.at("x1"), j.at("y0"), j.at("y1")};
}

Background background_from_json(const json& j) {
  Background bg;
  bg.kind = background_from_string(j.at("carrier").get<std::string>());
  if (bg.kind == BackgroundKind::Plane) {
    if (!j.contains("domain")) throw IoError("plane carrier needs a domain");
    bg.domain = domain_from_json(j.at("domain"));
  }
  return bg;
}

ScalarField compile_chart_field(const std::string& text, BackgroundKind kind) {
  if (kind == BackgroundKind::Sphere) {
    Expr e = Expr::compile(text, {"x", "y", "z"});
    return [e](const Vec3& p) {
      double v[3] = {p.x(), p.y(), p.z()};
      return e.eval(v, 3);
    };
  }
  Expr e = Expr::compile(text, {"x", "y", "r"});
  return [e](const Vec3& p) {
    double v[3] = {p.x(), p.y(), std::hypot(p.x(), p.y())};
    return e.eval(v, 3);
  };
}

RadialProfile compile_radial(const std::string& text) {
  Expr e = Expr::compile(text, {"r"});
  return [e](double r) { return e.eval(&r, 1); };
}

json values_to_json(const Eigen::ArrayXXd& v) {
  json rows = json::array();
  for (int i = 0; i < v.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < v.cols(); ++j) row.push_back(v(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::ArrayXXd values_from_json(const json& j, int nx, int ny) {
  Eigen::ArrayXXd v(nx, ny);
  if (static_cast<int>(j.size()) != nx) throw IoError("grid values shape mismatch");
  for (int i = 0; i < nx; ++i) {
    if (static_cast<int>(j[i].size()) != ny) throw IoError("grid values shape mismatch");
    for (int k = 0; k < ny; ++k) v(i, k) = j[i][k];
  }
  return v;
}

json ac_to_json(const AcPart& ac, bool planar) {
  json j;
  j["grid"] = grid_to_json(ac.grid);
  if (ac.const_term != 0.0) j["const_term"] = ac.const_term;
  if (std::holds_alternative<std::monostate>(ac.density)) {
    j["kind"] = "const";
    j["value"] = ac.const_term;
    j.erase("const_term");
  } else if (const auto* g = std::get_if<GridValuesAc>(&ac.density)) {
    j["kind"] = "grid";
    j["values"] = values_to_json(g->values);
    if (g->area_scale.size() > 0) j["area_scale"] = values_to_json(g->area_scale);
  } else if (const auto* f = std::get_if<FieldAc>(&ac.density)) {
    j["kind"] = "expr";
    j["expr"] = f->descriptor;
  } else if (const auto* r = std::get_if<RadialAc>(&ac.density)) {
    j["kind"] = "radial";
    j["center"] = point_to_json(r->center, planar);
    j["rmax"] = r->rmax;
    j["profile"] = r->descriptor;
    if (r->area_scale) j["area_scale"] = r->area_scale_descriptor;
  } else if (const auto* d = std::get_if<DiscAc>(&ac.density)) {
    j["kind"] = "discs";
    json discs = json::array();
    for (const auto& disc : d->discs)
      discs.push_back(json{{"center", point_to_json(disc.center, planar)},
                           {"mass", disc.mass},
                           {"radius", disc.radius}});
    j["discs"] = std::move(discs);
  }
  return j;
}

AcPart ac_from_json(const json& j, BackgroundKind kind) {
  AcPart ac;
  if (j.contains("grid")) ac.grid = grid_from_json(j.at("grid"));
  if (j.contains("const_term")) ac.const_term = j.at("const_term");
  std::string k = j.value("kind", j.contains("values") ? "grid" : "const");
  if (k == "const") {
    if (j.contains("value")) ac.const_term = j.at("value");
  } else if (k == "grid") {
    GridValuesAc g;
    g.values = values_from_json(j.at("values"), ac.grid.nx, ac.grid.ny);
    if (j.contains("area_scale"))
      g.area_scale = values_from_json(j.at("area_scale"), ac.grid.nx, ac.grid.ny);
    ac.density = std::move(g);
  } else if (k == "expr") {
    FieldAc f;
    f.descriptor = j.at("expr");
    f.fn = compile_chart_field(f.descriptor, kind);
    ac.density = std::move(f);
  } else if (k == "radial") {
    RadialAc r;
    r.center = point_from_json(j.at("center"));
    r.rmax = j.at("rmax");
    r.descriptor = j.at("profile");
    r.profile = compile_radial(r.descriptor);
    if (j.contains("area_scale")) {
      r.area_scale_descriptor = j.at("area_scale");
      r.area_scale = compile_radial(r.area_scale_descriptor);
    }
    ac.density = std::move(r);
  } else if (k == "discs") {
    DiscAc d;
    for (const auto& disc : j.at("discs"))
      d.discs.push_back({point_from_json(disc.at("center")), disc.at("mass"), disc.at("radius")});
    ac.density = std::move(d);
  } else {
    throw IoError("unknown ac kind: " + k);
  }
  return ac;
}

}  // namespace

std::string mesh_to_json(const ConeSurface& s) {
  json j;
  j["vertices"] = s.n_vertices;
  json faces = json::array();
  for (int f = 0; f < s.faces.rows(); ++f)
    faces.push_back(json::array({s.faces(f, 0), s.faces(f, 1), s.faces(f, 2)}));
  j["faces"] = std::move(faces);
  json lengths = json::array();
  for (int e = 0; e < s.edges.rows(); ++e) {
    std::string key = std::to_string(s.edges(e, 0)) + "-" + std::to_string(s.edges(e, 1));
    lengths.push_back(json::array({key, s.edge_lengths[e]}));
  }
  j["edge_lengths"] = std::move(lengths);
  if (s.has_positions()) {
    json pos = json::array();
    for (int v = 0; v < s.n_vertices; ++v)
      pos.push_back(json::array({s.positions(v, 0), s.positions(v, 1), s.positions(v, 2)}));
    j["positions"] = std::move(pos);
  }
  return j.dump(1);
}

ConeSurface mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("mesh parse error: ") + e.what());
  }
  try {
    int n = j.at("vertices");
    const json& jf = j.at("faces");
    Eigen::MatrixX3i F(jf.size(), 3);
    for (size_t f = 0; f < jf.size(); ++f)
      for (int k = 0; k < 3; ++k) F(f, k) = jf[f][k];
    std::vector<std::pair<std::pair<int, int>, double>> lengths;
    for (const auto& entry : j.at("edge_lengths")) {
      std::string key = entry[0];
      auto dash = key.find('-');
      if (dash == std::string::npos) throw IoError("bad edge key: " + key);
      int u = std::stoi(key.substr(0, dash));
      int v = std::stoi(key.substr(dash + 1));
      lengths.push_back({{u, v}, entry[1]});
    }
    Eigen::MatrixX3d pos;
    if (j.contains("positions")) {
      const json& jp = j.at("positions");
      pos.resize(jp.size(), 3);
      for (size_t v = 0; v < jp.size(); ++v)
        for (int k = 0; k < 3; ++k) pos(v, k) = jp[v][k];
    }
    return ConeSurface::build(n, F, lengths, pos);
  } catch (const json::exception& e) {
    throw IoError(std::string("mesh schema error: ") + e.what());
  }
}

std::string measure_to_json(const SignedMeasure& mu) {
  json j;
  bool planar = mu.carrier.kind != BackgroundKind::Sphere;
  j["carrier"] = to_string(mu.carrier.kind);
  if (mu.carrier.domain) j["domain"] = domain_to_json(*mu.carrier.domain);
  json atoms = json::array();
  for (const Atom& a : mu.atoms)
    atoms.push_back(json{{"point", point_to_json(a.point, planar)}, {"mass", a.mass}});
  j["atoms"] = std::move(atoms);
  json curves = json::array();
  for (const CurvePart& c : mu.curves) {
    json poly = json::array();
    for (int i = 0; i < c.polyline.rows(); ++i)
      poly.push_back(point_to_json(c.polyline.row(i), planar));
    json density = c.density.is_constant()
                       ? json{{"kind", "const"}, {"value", c.density.constant}}
                       : json{{"kind", "expr"}, {"expr", c.density.descriptor}};
    curves.push_back(json{{"polyline", std::move(poly)}, {"density", std::move(density)}});
  }
  j["curves"] = std::move(curves);
  j["ac"] = mu.ac ? ac_to_json(*mu.ac, planar) : json(nullptr);
  j["quadrature_order"] = mu.quadrature_order;
  return j.dump(1);
}

SignedMeasure measure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("measure parse error: ") + e.what());
  }
  try {
    SignedMeasure mu;
    mu.carrier = background_from_json(j);
    if (j.contains("quadrature_order")) mu.quadrature_order = j.at("quadrature_order");
    for (const auto& a : j.value("atoms", json::array()))
      mu.atoms.push_back({point_from_json(a.at("point")), a.at("mass")});
    for (const auto& c : j.value("curves", json::array())) {
      CurvePart part;
      const json& poly = c.at("polyline");
      part.polyline.resize(poly.size(), 3);
      for (size_t i = 0; i < poly.size(); ++i) part.polyline.row(i) = point_from_json(poly[i]);
      const json& d = c.at("density");
      std::string kind = d.value("kind", "const");
      if (kind == "const") {
        part.density.constant = d.at("value");
        part.density.descriptor = "const";
      } else if (kind == "expr") {
        part.density.descriptor = d.at("expr");
        Expr e = Expr::compile(part.density.descriptor, {"s"});
        part.density.fn = [e](double s) { return e.eval(&s, 1); };
      } else {
        throw IoError("unknown curve density kind: " + kind);
      }
      mu.curves.push_back(std::move(part));
    }
    if (j.contains("ac") && !j.at("ac").is_null())
      mu.ac = ac_from_json(j.at("ac"), mu.carrier.kind);
    mu.normalize();
    return mu;
  } catch (const json::exception& e) {
    throw IoError(std::string("measure schema error: ") + e.what());
  }
}

std::string metric_to_json(const ConformalMetric& m) {
  json j;
  bool planar = m.background.kind != BackgroundKind::Sphere;
  j["background"] = to_string(m.background.kind);
  if (m.background.domain) j["domain"] = domain_to_json(*m.background.domain);
  json pot;
  if (std::holds_alternative<ZeroPotential>(m.potential)) {
    pot["kind"] = "zero";
  } else if (const auto* f = std::get_if<FieldPotential>(&m.potential)) {
    pot["kind"] = "expr";
    pot["expr"] = f->descriptor;
  } else if (const auto* g = std::get_if<GridPotential>(&m.potential)) {
    pot["kind"] = "grid";
    pot["grid"] = grid_to_json(g->grid);
    pot["values"] = values_to_json(g->values);
  } else if (const auto* mp = std::get_if<MeasurePotential>(&m.potential)) {
    pot["kind"] = "measure";
    pot["measure"] = json::parse(measure_to_json(mp->mu));
    pot["truncation"] = mp->truncation;
  }
  j["potential"] = std::move(pot);
  j["scale"] = m.scale;
  if (m.potential_shift != 0.0) j["potential_shift"] = m.potential_shift;
  json atoms = json::array();
  for (const Atom& a : m.curvature_atoms)
    atoms.push_back(json{{"point", point_to_json(a.point, planar)}, {"mass", a.mass}});
  j["atoms"] = std::move(atoms);
  j["fd_grid"] = grid_to_json(m.fd_grid);
  return j.dump(1);
}

ConformalMetric metric_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("metric parse error: ") + e.what());
  }
  try {
    ConformalMetric m;
    Background bg;
    bg.kind = background_from_string(j.at("background").get<std::string>());
    if (bg.kind == BackgroundKind::Plane) {
      if (!j.contains("domain")) throw IoError("plane metric needs a domain");
      bg.domain = domain_from_json(j.at("domain"));
    }
    m.background = bg;
    const json& pot = j.at("potential");
    std::string kind = pot.at("kind");
    if (kind == "zero") {
      m.potential = ZeroPotential{};
    } else if (kind == "expr") {
      FieldPotential f;
      f.descriptor = pot.at("expr");
      f.fn = compile_chart_field(f.descriptor, bg.kind);
      m.potential = std::move(f);
    } else if (kind == "grid") {
      GridPotential g;
      g.grid = grid_from_json(pot.at("grid"));
      g.values = values_from_json(pot.at("values"), g.grid.nx, g.grid.ny);
      m.potential = std::move(g);
    } else if (kind == "measure") {
      MeasurePotential mp;
      mp.mu = measure_from_json(pot.at("measure").dump());
      mp.truncation = pot.value("truncation", 64);
      m.potential = std::move(mp);
    } else {
      throw IoError("unknown potential kind: " + kind);
    }
    m.scale = j.value("scale", 1.0);
    m.potential_shift = j.value("potential_shift", 0.0);
    for (const auto& a : j.value("atoms", json::array()))
      m.curvature_atoms.push_back({point_from_json(a.at("point")), a.at("mass")});
    if (j.contains("fd_grid")) m.fd_grid = grid_from_json(j.at("fd_grid"));
    else m.fd_grid = GridSpec::for_background(bg);
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("metric schema error: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_header(const std::string& command_line, uint64_t seed) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "# bic %s | cmd: %s | seed: %" PRIu64 "\n", kToolVersion,
                command_line.c_str(), seed);
  return buf;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string distance_table_csv(const std::vector<DistanceRow>& rows,
                               const std::string& command_line, uint64_t seed) {
  std::string out = csv_header(command_line, seed);
  out += "p,q,level,distance,status\n";
  for (const auto& r : rows)
    out += std::to_string(r.p) + "," + std::to_string(r.q) + "," + std::to_string(r.level) +
           "," + num(r.distance) + "," + r.status + "\n";
  return out;
}

std::string icosphere_report_csv(const std::vector<IcosphereRow>& rows,
                                 const std::string& command_line, uint64_t seed) {
  std::string out = csv_header(command_line, seed);
  out += "k,nodes,uniform_lb,weak_lb,total_defect\n";
  for (const auto& r : rows)
    out += std::to_string(r.k) + "," + std::to_string(r.nodes) + "," + num(r.uniform_lb) + "," +
           num(r.weak_lb) + "," + num(r.total_defect) + "\n";
  return out;
}

std::string mollification_report_csv(const std::vector<MollificationRow>& rows,
                                     const std::string& command_line, uint64_t seed) {
  std::string out = csv_header(command_line, seed);
  out += "eps,sup_diff,sample_size,seed\n";
  for (const auto& r : rows)
    out += num(r.eps) + "," + num(r.sup_diff) + "," + std::to_string(r.sample_size) + "," +
           std::to_string(r.seed) + "\n";
  return out;
}

std::string lantern_report_csv(const std::vector<LanternRow>& rows,
                               const std::string& command_line, uint64_t seed) {
  std::string out = csv_header(command_line, seed);
  out += "m,slices,sectors,area,area_over_2pi\n";
  for (const auto& r : rows)
    out += std::to_string(r.base) + "," + std::to_string(r.slices) + "," +
           std::to_string(r.sectors) + "," + num(r.area) + "," + num(r.area / kTwoPi) + "\n";
  return out;
}

std::string references_csv(const std::vector<ReferenceValue>& refs,
                           const std::string& command_line, uint64_t seed) {
  std::string out = csv_header(command_line, seed);
  out += "quantity,value,provenance\n";
  for (const auto& r : refs) out += r.quantity + "," + num(r.value) + "," + r.provenance + "\n";
  return out;
}

}  // namespace bic
