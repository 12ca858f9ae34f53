#include "bic/cone_surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace bic {

namespace {

std::map<std::pair<int, int>, int> edge_map_of(const Eigen::MatrixX2i& edges) {
  std::map<std::pair<int, int>, int> m;
  for (int e = 0; e < edges.rows(); ++e) m[{edges(e, 0), edges(e, 1)}] = e;
  return m;
}

}  // namespace

int ConeSurface::edge_index(int u, int v) const {
  int lo = std::min(u, v), hi = std::max(u, v);
  // binary search over the sorted canonical pairs
  int a = 0, b = static_cast<int>(edges.rows());
  while (a < b) {
    int m = (a + b) / 2;
    if (edges(m, 0) < lo || (edges(m, 0) == lo && edges(m, 1) < hi)) a = m + 1;
    else b = m;
  }
  if (a < edges.rows() && edges(a, 0) == lo && edges(a, 1) == hi) return a;
  return -1;
}

double ConeSurface::length(int u, int v) const {
  int e = edge_index(u, v);
  if (e < 0) throw InvalidArgument("no such edge");
  return edge_lengths[e];
}

ConeSurface ConeSurface::build(
    int n_vertices, Eigen::MatrixX3i faces,
    const std::vector<std::pair<std::pair<int, int>, double>>& lengths,
    Eigen::MatrixX3d positions) {
  ConeSurface s;
  s.n_vertices = n_vertices;
  s.faces = std::move(faces);
  s.positions = std::move(positions);

  std::set<std::pair<int, int>> eset;
  for (int f = 0; f < s.faces.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = s.faces(f, k), v = s.faces(f, (k + 1) % 3);
      eset.insert({std::min(u, v), std::max(u, v)});
    }
  s.edges.resize(static_cast<int>(eset.size()), 2);
  int idx = 0;
  for (auto& e : eset) {
    s.edges(idx, 0) = e.first;
    s.edges(idx, 1) = e.second;
    ++idx;
  }
  s.edge_lengths = Eigen::VectorXd::Constant(s.edges.rows(), -1.0);
  auto emap = edge_map_of(s.edges);
  for (const auto& [key, len] : lengths) {
    auto it = emap.find({std::min(key.first, key.second), std::max(key.first, key.second)});
    if (it == emap.end()) throw InvalidArgument("edge length given for a non-edge");
    s.edge_lengths[it->second] = len;
  }
  for (int e = 0; e < s.edge_lengths.size(); ++e)
    if (s.edge_lengths[e] < 0.0) throw InvalidArgument("missing edge length");

  s.face_edges.resize(s.faces.rows(), 3);
  for (int f = 0; f < s.faces.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = s.faces(f, (k + 1) % 3), v = s.faces(f, (k + 2) % 3);
      s.face_edges(f, k) = emap.at({std::min(u, v), std::max(u, v)});
    }
  return s;
}

ConeSurface ConeSurface::from_positions(const Eigen::MatrixX3d& V, const Eigen::MatrixX3i& F) {
  std::set<std::pair<int, int>> eset;
  for (int f = 0; f < F.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = F(f, k), v = F(f, (k + 1) % 3);
      eset.insert({std::min(u, v), std::max(u, v)});
    }
  std::vector<std::pair<std::pair<int, int>, double>> lengths;
  lengths.reserve(eset.size());
  for (auto& e : eset)
    lengths.push_back({e, (V.row(e.first) - V.row(e.second)).norm()});
  return build(static_cast<int>(V.rows()), F, lengths, V);
}

ValidationReport validate(const ConeSurface& s) {
  ValidationReport rep;
  // positive finite lengths
  for (int e = 0; e < s.edges.rows(); ++e)
    if (!(s.edge_lengths[e] > 0.0) || !std::isfinite(s.edge_lengths[e]))
      rep.problems.push_back("edge " + std::to_string(s.edges(e, 0)) + "-" +
                             std::to_string(s.edges(e, 1)) + " has non-positive length");
  // strict triangle inequalities
  for (int f = 0; f < s.faces.rows(); ++f) {
    double a = s.edge_lengths[s.face_edges(f, 0)];
    double b = s.edge_lengths[s.face_edges(f, 1)];
    double c = s.edge_lengths[s.face_edges(f, 2)];
    double margin = 1e-12 * std::max({a, b, c});
    if (a + b - c <= margin || b + c - a <= margin || c + a - b <= margin)
      rep.problems.push_back("face " + std::to_string(f) + " violates the triangle inequality");
  }
  // each edge in exactly two faces, once per orientation
  std::map<std::pair<int, int>, int> oriented;
  Eigen::VectorXi edge_count = Eigen::VectorXi::Zero(s.edges.rows());
  for (int f = 0; f < s.faces.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = s.faces(f, k), v = s.faces(f, (k + 1) % 3);
      oriented[{u, v}]++;
      int e = s.edge_index(u, v);
      if (e >= 0) edge_count[e]++;
    }
  for (int e = 0; e < s.edges.rows(); ++e) {
    if (edge_count[e] == 1)
      rep.problems.push_back("boundary edge " + std::to_string(s.edges(e, 0)) + "-" +
                             std::to_string(s.edges(e, 1)) + " (surface not closed)");
    else if (edge_count[e] > 2)
      rep.problems.push_back("non-manifold edge " + std::to_string(s.edges(e, 0)) + "-" +
                             std::to_string(s.edges(e, 1)));
  }
  for (auto& [dir, count] : oriented)
    if (count > 1)
      rep.problems.push_back("inconsistent orientation on edge " + std::to_string(dir.first) +
                             "-" + std::to_string(dir.second));
  // connectivity over vertices through edges
  if (s.n_vertices > 0) {
    std::vector<int> comp(s.n_vertices, -1);
    std::vector<int> stack = {0};
    comp[0] = 0;
    std::vector<std::vector<int>> adj(s.n_vertices);
    for (int e = 0; e < s.edges.rows(); ++e) {
      adj[s.edges(e, 0)].push_back(s.edges(e, 1));
      adj[s.edges(e, 1)].push_back(s.edges(e, 0));
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = 0;
          stack.push_back(w);
        }
    }
    if (std::any_of(comp.begin(), comp.end(), [](int c) { return c < 0; }))
      rep.problems.push_back("surface is disconnected");
  }
  return rep;
}

double face_angle(const ConeSurface& s, int f, int corner) {
  // corner angle between the two edges adjacent to that corner
  double a = s.edge_lengths[s.face_edges(f, corner)];              // opposite
  double b = s.edge_lengths[s.face_edges(f, (corner + 1) % 3)];
  double c = s.edge_lengths[s.face_edges(f, (corner + 2) % 3)];
  double cosv = (b * b + c * c - a * a) / (2.0 * b * c);
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

double cone_angle(const ConeSurface& s, int v) {
  if (v < 0 || v >= s.n_vertices) throw InvalidArgument("no such vertex");
  double total = 0.0;
  for (int f = 0; f < s.faces.rows(); ++f)
    for (int k = 0; k < 3; ++k)
      if (s.faces(f, k) == v) total += face_angle(s, f, k);
  return total;
}

Eigen::VectorXd angle_defects(const ConeSurface& s) {
  Eigen::VectorXd defect = Eigen::VectorXd::Constant(s.n_vertices, kTwoPi);
  for (int f = 0; f < s.faces.rows(); ++f)
    for (int k = 0; k < 3; ++k) defect[s.faces(f, k)] -= face_angle(s, f, k);
  return defect;
}

SignedMeasure curvature_measure(const ConeSurface& s) {
  Eigen::VectorXd defect = angle_defects(s);
  SignedMeasure mu;
  bool on_sphere = s.has_positions();
  if (on_sphere)
    for (int v = 0; v < s.n_vertices && on_sphere; ++v)
      on_sphere = std::abs(s.positions.row(v).norm() - 1.0) < 1e-9;
  if (on_sphere) {
    mu.carrier = Background::sphere();
  } else if (s.has_positions()) {
    double r = s.positions.cwiseAbs().maxCoeff() + 1.0;
    mu.carrier = Background::plane(PlaneDomain::centered_square(r));
  } else {
    mu.carrier = Background::plane(PlaneDomain::centered_square(double(s.n_vertices) + 1.0));
  }
  for (int v = 0; v < s.n_vertices; ++v) {
    // law-of-cosines roundoff leaves ~1e-15 noise at genuinely flat vertices
    if (std::abs(defect[v]) <= 1e-12) continue;
    Vec3 p = s.has_positions() ? Vec3(s.positions.row(v)) : Vec3(v, 0, 0);
    mu.atoms.push_back({p, defect[v]});
  }
  mu.normalize();
  return mu;
}

int euler_characteristic(const ConeSurface& s) {
  return s.n_vertices - static_cast<int>(s.edges.rows()) + static_cast<int>(s.faces.rows());
}

}  // namespace bic
