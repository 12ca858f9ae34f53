#include "bic/geodesic_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace bic {

std::vector<double> van_der_corput(int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    double x = 0.0, f = 0.5;
    for (int k = i; k; k >>= 1, f *= 0.5)
      if (k & 1) x += f;
    out.push_back(x);
  }
  return out;
}

int GeodesicGraph::nearest_node(const Vec3& p, const Background& bg) const {
  if (!has_positions()) throw InvalidArgument("graph has no node positions");
  int best = 0;
  double bd = bg.distance(p, node_positions.row(0));
  for (int i = 1; i < n_nodes(); ++i) {
    double d = bg.distance(p, node_positions.row(i));
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

namespace {

struct ArcAccumulator {
  std::vector<std::pair<int, int>> ends;
  std::vector<double> w;
  void add(int a, int b, double weight) {
    ends.push_back({a, b});
    w.push_back(weight);
  }
  void to_csr(GeodesicGraph& g) const {
    int n = g.n_nodes();
    std::vector<int> deg(n, 0);
    for (auto [a, b] : ends) {
      deg[a]++;
      deg[b]++;
    }
    g.head.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) g.head[i + 1] = g.head[i] + deg[i];
    g.adj.resize(g.head[n]);
    g.weight.resize(g.head[n]);
    std::vector<int> fill(g.head.begin(), g.head.end() - 1);
    for (size_t k = 0; k < ends.size(); ++k) {
      auto [a, b] = ends[k];
      g.adj[fill[a]] = b;
      g.weight[fill[a]++] = w[k];
      g.adj[fill[b]] = a;
      g.weight[fill[b]++] = w[k];
    }
  }
};

// Per-edge node lists (canonical direction, endpoints included, ordered by t).
struct EdgeNodes {
  std::vector<int> ids;
  std::vector<double> ts;
};

std::vector<EdgeNodes> place_steiner(const ConeSurface& s, int level, GeodesicGraph& g) {
  g.refinement_level = level;
  g.n_mesh_vertices = s.n_vertices;
  std::vector<double> base = van_der_corput(level);
  std::vector<int> order(base.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return base[a] < base[b]; });

  std::vector<EdgeNodes> en(s.edges.rows());
  for (int e = 0; e < s.edges.rows(); ++e) {
    EdgeNodes nodes;
    nodes.ids.push_back(s.edges(e, 0));
    nodes.ts.push_back(0.0);
    for (int k : order) {
      g.steiner.push_back({e, base[k]});
      nodes.ids.push_back(g.n_mesh_vertices + static_cast<int>(g.steiner.size()) - 1);
      nodes.ts.push_back(base[k]);
    }
    nodes.ids.push_back(s.edges(e, 1));
    nodes.ts.push_back(1.0);
    en[e] = std::move(nodes);
  }
  return en;
}

}  // namespace

GeodesicGraph build_geodesic_graph(const ConeSurface& s, int refinement_level) {
  if (refinement_level < 0) throw InvalidArgument("refinement_level must be >= 0");
  GeodesicGraph g;
  auto en = place_steiner(s, refinement_level, g);
  ArcAccumulator arcs;

  // consecutive nodes along each edge
  for (int e = 0; e < s.edges.rows(); ++e) {
    const EdgeNodes& nodes = en[e];
    double len = s.edge_lengths[e];
    for (size_t i = 0; i + 1 < nodes.ids.size(); ++i)
      arcs.add(nodes.ids[i], nodes.ids[i + 1], (nodes.ts[i + 1] - nodes.ts[i]) * len);
  }

  // cross-face arcs from the planar layout of each face
  for (int f = 0; f < s.faces.rows(); ++f) {
    int va = s.faces(f, 0), vb = s.faces(f, 1), vc = s.faces(f, 2);
    double c = s.length(va, vb), a = s.length(vb, vc), b = s.length(vc, va);
    // layout: A at origin, B on the x-axis, C above
    double cosA = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
    Eigen::Vector2d A(0, 0), B(c, 0), C(b * cosA, b * std::sqrt(std::max(0.0, 1.0 - cosA * cosA)));
    struct Side {
      int edge;
      Eigen::Vector2d from, to;
      bool flip;  // true when canonical direction runs to->from in layout terms
    };
    auto mk = [&](int u, int v, const Eigen::Vector2d& U, const Eigen::Vector2d& V) {
      int e = s.edge_index(u, v);
      return Side{e, U, V, s.edges(e, 0) != u};
    };
    Side sides[3] = {mk(va, vb, A, B), mk(vb, vc, B, C), mk(vc, va, C, A)};
    int shared[3][3] = {};  // shared vertex of side pairs 01, 02, 12
    shared[0][1] = vb;
    shared[0][2] = va;
    shared[1][2] = vc;
    auto layout_pos = [&](const Side& sd, double t) {
      double tt = sd.flip ? 1.0 - t : t;
      return (sd.from + tt * (sd.to - sd.from)).eval();
    };
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) {
        const EdgeNodes& X = en[sides[x].edge];
        const EdgeNodes& Y = en[sides[y].edge];
        int w = shared[x][y];
        for (size_t i = 0; i < X.ids.size(); ++i) {
          int ni = X.ids[i];
          bool vi = ni < s.n_vertices;
          if (ni == w) continue;  // collinear with the other side
          for (size_t j = 0; j < Y.ids.size(); ++j) {
            int nj = Y.ids[j];
            if (nj == w) continue;
            if (vi && nj < s.n_vertices) continue;  // vertex pairs are edges
            Eigen::Vector2d P = layout_pos(sides[x], X.ts[i]);
            Eigen::Vector2d Q = layout_pos(sides[y], Y.ts[j]);
            arcs.add(ni, nj, (P - Q).norm());
          }
        }
      }
  }
  arcs.to_csr(g);
  if (s.has_positions()) {
    g.node_positions.resize(g.n_nodes(), 3);
    g.node_positions.topRows(s.n_vertices) = s.positions;
    for (size_t k = 0; k < g.steiner.size(); ++k) {
      int e = g.steiner[k].edge;
      Vec3 p0 = s.positions.row(s.edges(e, 0)), p1 = s.positions.row(s.edges(e, 1));
      g.node_positions.row(s.n_vertices + k) = p0 + g.steiner[k].t * (p1 - p0);
    }
  }
  return g;
}

GeodesicGraph build_weighted_graph(
    const ConeSurface& substrate, const Background& bg, int steiner_per_edge,
    const std::function<double(const Vec3&, const Vec3&)>& arc_weight) {
  if (!substrate.has_positions())
    throw InvalidArgument("weighted graph needs substrate positions");
  GeodesicGraph g;
  auto en = place_steiner(substrate, steiner_per_edge, g);

  g.node_positions.resize(g.n_nodes(), 3);
  g.node_positions.topRows(substrate.n_vertices) = substrate.positions;
  for (size_t k = 0; k < g.steiner.size(); ++k) {
    int e = g.steiner[k].edge;
    Vec3 p0 = substrate.positions.row(substrate.edges(e, 0));
    Vec3 p1 = substrate.positions.row(substrate.edges(e, 1));
    g.node_positions.row(substrate.n_vertices + k) =
        bg.geodesic_point(p0, p1, g.steiner[k].t);
  }

  ArcAccumulator arcs;
  auto add = [&](int i, int j) {
    arcs.add(i, j, arc_weight(g.node_positions.row(i), g.node_positions.row(j)));
  };
  for (int e = 0; e < substrate.edges.rows(); ++e) {
    const EdgeNodes& nodes = en[e];
    for (size_t i = 0; i + 1 < nodes.ids.size(); ++i) add(nodes.ids[i], nodes.ids[i + 1]);
  }
  for (int f = 0; f < substrate.faces.rows(); ++f) {
    // face_edges(f, k) is the edge opposite corner k, so the shared vertex of
    // the sides opposite corners x and y is the remaining corner.
    int eds[3] = {substrate.face_edges(f, 0), substrate.face_edges(f, 1),
                  substrate.face_edges(f, 2)};
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) {
        const EdgeNodes& X = en[eds[x]];
        const EdgeNodes& Y = en[eds[y]];
        int w = substrate.faces(f, 3 - x - y);
        for (size_t i = 0; i < X.ids.size(); ++i) {
          int ni = X.ids[i];
          bool vi = ni < substrate.n_vertices;
          if (ni == w) continue;
          for (size_t j = 0; j < Y.ids.size(); ++j) {
            int nj = Y.ids[j];
            if (nj == w) continue;
            if (vi && nj < substrate.n_vertices) continue;
            add(ni, nj);
          }
        }
      }
  }
  arcs.to_csr(g);
  return g;
}

namespace {

// Dijkstra with (distance, node index) keys: lowest index wins ties.
Eigen::VectorXd dijkstra(const GeodesicGraph& g, int source, int stop_at) {
  int n = g.n_nodes();
  if (source < 0 || source >= n) throw InvalidArgument("unknown vertex");
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (v == stop_at) break;
    for (int k = g.head[v]; k < g.head[v + 1]; ++k) {
      int w = g.adj[k];
      double nd = d + g.weight[k];
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.push({nd, w});
      }
    }
  }
  return dist;
}

}  // namespace

Eigen::VectorXd shortest_paths(const GeodesicGraph& g, int source) {
  return dijkstra(g, source, -1);
}

double shortest_path(const GeodesicGraph& g, int source, int target) {
  if (target < 0 || target >= g.n_nodes()) throw InvalidArgument("unknown vertex");
  return dijkstra(g, source, target)[target];
}

double intrinsic_distance(const ConeSurface& s, int p, int q, int refinement_level) {
  if (p < 0 || p >= s.n_vertices || q < 0 || q >= s.n_vertices)
    throw InvalidArgument("unknown vertex");
  if (p == q) return 0.0;
  GeodesicGraph g = build_geodesic_graph(s, refinement_level);
  return shortest_path(g, p, q);
}

}  // namespace bic
