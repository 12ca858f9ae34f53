#include "bic/meshes.hpp"

#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace bic {

namespace {

struct MeshSoup {
  std::vector<Vec3> V;
  std::vector<Eigen::Vector3i> F;

  int add(const Vec3& p) {
    V.push_back(p);
    return static_cast<int>(V.size()) - 1;
  }
  void tri(int a, int b, int c) { F.emplace_back(a, b, c); }

  ConeSurface to_surface() const {
    Eigen::MatrixX3d Vm(V.size(), 3);
    for (size_t i = 0; i < V.size(); ++i) Vm.row(i) = V[i];
    Eigen::MatrixX3i Fm(F.size(), 3);
    for (size_t i = 0; i < F.size(); ++i) Fm.row(i) = F[i];
    return ConeSurface::from_positions(Vm, Fm);
  }
};

MeshSoup polar_icosahedron() {
  MeshSoup m;
  m.add(Vec3(0, 0, 1));
  m.add(Vec3(0, 0, -1));
  double lat = std::atan(0.5);
  for (int i = 0; i < 5; ++i) {
    double a = kTwoPi * i / 5;
    m.add(Vec3(std::cos(a) * std::cos(lat), std::sin(a) * std::cos(lat), std::sin(lat)));
  }
  for (int i = 0; i < 5; ++i) {
    double a = kTwoPi * i / 5 + kPi / 5;
    m.add(Vec3(std::cos(a) * std::cos(lat), std::sin(a) * std::cos(lat), -std::sin(lat)));
  }
  for (int i = 0; i < 5; ++i) {
    int j = (i + 1) % 5;
    int ui = 2 + i, uj = 2 + j, li = 7 + i, lj = 7 + j;
    m.tri(0, ui, uj);
    m.tri(1, lj, li);
    m.tri(ui, li, uj);
    m.tri(uj, li, lj);
  }
  return m;
}

}  // namespace

ConeSurface icosphere_mesh(int level) {
  if (level < 0) throw InvalidArgument("icosphere level must be >= 0");
  MeshSoup m = polar_icosahedron();
  for (int l = 0; l < level; ++l) {
    MeshSoup next;
    next.V = m.V;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 p = (next.V[a] + next.V[b]).normalized();
      int id = next.add(p);
      midpoint[key] = id;
      return id;
    };
    for (const auto& f : m.F) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.tri(f[0], ab, ca);
      next.tri(ab, f[1], bc);
      next.tri(ca, bc, f[2]);
      next.tri(ab, bc, ca);
    }
    m = std::move(next);
  }
  return m.to_surface();
}

ConeSurface cube_mesh(double a) {
  if (!(a > 0)) throw InvalidArgument("cube side must be positive");
  MeshSoup m;
  double s = 0.5 * a;
  // vertex i has coordinates (+-s, +-s, +-s) in binary order x|y|z
  for (int i = 0; i < 8; ++i)
    m.add(Vec3((i & 1) ? s : -s, (i & 2) ? s : -s, (i & 4) ? s : -s));
  auto quad = [&](int a0, int b0, int c0, int d0) {
    m.tri(a0, b0, c0);
    m.tri(a0, c0, d0);
  };
  quad(0, 2, 3, 1);  // z = -s, outward -z
  quad(4, 5, 7, 6);  // z = +s
  quad(0, 1, 5, 4);  // y = -s
  quad(2, 6, 7, 3);  // y = +s
  quad(0, 4, 6, 2);  // x = -s
  quad(1, 3, 7, 5);  // x = +s
  return m.to_surface();
}

namespace {

Vec3 lantern_vertex(int m, int n, int j, int i) {
  double offset = (j % 2) ? 0.5 : 0.0;
  double a = kTwoPi * (i + offset) / n;
  return Vec3(std::cos(a), std::sin(a), double(j) / m);
}

}  // namespace

ConeSurface lantern_mesh(int m, int n, bool closed) {
  if (m < 1 || n < 3) throw InvalidArgument("lantern needs m >= 1 slices and n >= 3 sectors");
  MeshSoup soup;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i < n; ++i) soup.add(lantern_vertex(m, n, j, i));
  auto vid = [&](int j, int i) { return j * n + ((i % n) + n) % n; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      if (j % 2 == 0) {
        soup.tri(vid(j, i), vid(j, i + 1), vid(j + 1, i));
        soup.tri(vid(j + 1, i + 1), vid(j + 1, i), vid(j, i + 1));
      } else {
        soup.tri(vid(j, i), vid(j, i + 1), vid(j + 1, i + 1));
        soup.tri(vid(j + 1, i + 1), vid(j + 1, i), vid(j, i));
      }
    }
  if (closed) {
    int bottom = soup.add(Vec3(0, 0, 0));
    int top = soup.add(Vec3(0, 0, 1));
    for (int i = 0; i < n; ++i) {
      soup.tri(bottom, vid(0, i + 1), vid(0, i));
      soup.tri(top, vid(m, i), vid(m, i + 1));
    }
  }
  return soup.to_surface();
}

double lantern_area(int m, int n) {
  // all 2mn lateral triangles are congruent: base 2 sin(pi/n), apex lifted by
  // 1/m over the base chord's sagitta
  double base = 2.0 * std::sin(kPi / n);
  double sagitta = 1.0 - std::cos(kPi / n);
  double slant = std::hypot(sagitta, 1.0 / m);
  return double(m) * n * base * slant;
}

ConeSurface torus_grid_mesh(int n) {
  if (n < 3) throw InvalidArgument("torus grid needs n >= 3");
  Eigen::MatrixX3d V(n * n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V.row(i * n + j) = Vec3(double(i) / n, double(j) / n, 0.0);
  std::vector<Eigen::Vector3i> F;
  auto vid = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      F.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      F.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  Eigen::MatrixX3i Fm(F.size(), 3);
  for (size_t k = 0; k < F.size(); ++k) Fm.row(k) = F[k];
  // lengths under the flat torus metric (wraparound-aware)
  Background bg = Background::torus();
  std::set<std::pair<int, int>> eset;
  for (int f = 0; f < Fm.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = Fm(f, k), v = Fm(f, (k + 1) % 3);
      eset.insert({std::min(u, v), std::max(u, v)});
    }
  std::vector<std::pair<std::pair<int, int>, double>> lengths;
  for (auto& e : eset)
    lengths.push_back({e, bg.distance(V.row(e.first), V.row(e.second))});
  return ConeSurface::build(n * n, Fm, lengths, V);
}

ConeSurface disc_polar_mesh(double R, int rings, int sectors, const Vec3& center) {
  if (R <= 0 || rings < 1 || sectors < 3) throw InvalidArgument("bad disc mesh parameters");
  MeshSoup soup;
  soup.add(center);
  for (int j = 1; j <= rings; ++j) {
    double r = R * j / rings;
    for (int i = 0; i < sectors; ++i) {
      double a = kTwoPi * i / sectors;
      soup.add(center + Vec3(r * std::cos(a), r * std::sin(a), 0.0));
    }
  }
  auto vid = [&](int j, int i) { return 1 + (j - 1) * sectors + ((i % sectors + sectors) % sectors); };
  for (int i = 0; i < sectors; ++i) soup.tri(0, vid(1, i), vid(1, i + 1));
  for (int j = 1; j < rings; ++j)
    for (int i = 0; i < sectors; ++i) {
      soup.tri(vid(j, i), vid(j + 1, i), vid(j + 1, i + 1));
      soup.tri(vid(j, i), vid(j + 1, i + 1), vid(j, i + 1));
    }
  return soup.to_surface();
}

ConeSurface cone_cap_mesh(double theta, double R, int rings, int sectors) {
  if (theta <= 0 || R <= 0 || rings < 1 || sectors < 3)
    throw InvalidArgument("bad cone mesh parameters");
  // intrinsic polar coordinates (rho, phi) with phi in [0, theta); chord
  // between (r1, p1) and (r2, p2) from the flat development
  auto chord = [&](double r1, double p1, double r2, double p2) {
    double dp = std::abs(p1 - p2);
    dp = std::min(dp, theta - dp);
    return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(dp)));
  };
  int nv = 1 + rings * sectors + 1;  // apex + rings + rim cap center
  auto vid = [&](int j, int i) { return 1 + (j - 1) * sectors + ((i % sectors + sectors) % sectors); };
  int cap = nv - 1;
  std::vector<Eigen::Vector3i> F;
  for (int i = 0; i < sectors; ++i) F.push_back({0, vid(1, i), vid(1, i + 1)});
  for (int j = 1; j < rings; ++j)
    for (int i = 0; i < sectors; ++i) {
      F.push_back({vid(j, i), vid(j + 1, i), vid(j + 1, i + 1)});
      F.push_back({vid(j, i), vid(j + 1, i + 1), vid(j, i + 1)});
    }
  for (int i = 0; i < sectors; ++i) F.push_back({cap, vid(rings, i + 1), vid(rings, i)});
  Eigen::MatrixX3i Fm(F.size(), 3);
  for (size_t k = 0; k < F.size(); ++k) Fm.row(k) = F[k];

  auto coords = [&](int v) -> std::pair<double, double> {
    int j = (v - 1) / sectors + 1;
    int i = (v - 1) % sectors;
    return {R * j / rings, theta * i / sectors};
  };
  std::set<std::pair<int, int>> eset;
  for (int f = 0; f < Fm.rows(); ++f)
    for (int k = 0; k < 3; ++k) {
      int u = Fm(f, k), v = Fm(f, (k + 1) % 3);
      eset.insert({std::min(u, v), std::max(u, v)});
    }
  // rim cap: flat disc whose fan spokes equal the radius that makes the cap
  // a flat n-gon of circumradius matching the rim chords
  double rim_chord = chord(R, 0.0, R, theta / sectors);
  double cap_spoke = rim_chord / (2.0 * std::sin(kPi / sectors));
  std::vector<std::pair<std::pair<int, int>, double>> lengths;
  for (auto& e : eset) {
    auto [u, v] = e;
    double len;
    if (u == 0) {
      len = coords(v).first;
    } else if (v == cap) {
      len = cap_spoke;
    } else {
      auto [r1, p1] = coords(u);
      auto [r2, p2] = coords(v);
      len = chord(r1, p1, r2, p2);
    }
    lengths.push_back({e, len});
  }
  return ConeSurface::build(nv, Fm, lengths);
}

ConeSurface can_mesh(double r, double h, int sectors, int bands) {
  if (r <= 0 || h <= 0 || sectors < 3 || bands < 1)
    throw InvalidArgument("bad can mesh parameters");
  MeshSoup soup;
  for (int j = 0; j <= bands; ++j)
    for (int i = 0; i < sectors; ++i) {
      double a = kTwoPi * i / sectors;
      soup.add(Vec3(r * std::cos(a), r * std::sin(a), h * j / bands));
    }
  auto vid = [&](int j, int i) { return j * sectors + ((i % sectors + sectors) % sectors); };
  for (int j = 0; j < bands; ++j)
    for (int i = 0; i < sectors; ++i) {
      soup.tri(vid(j, i), vid(j, i + 1), vid(j + 1, i));
      soup.tri(vid(j + 1, i + 1), vid(j + 1, i), vid(j, i + 1));
    }
  int bottom = soup.add(Vec3(0, 0, 0));
  int top = soup.add(Vec3(0, 0, h));
  for (int i = 0; i < sectors; ++i) {
    soup.tri(bottom, vid(0, i + 1), vid(0, i));
    soup.tri(top, vid(bands, i), vid(bands, i + 1));
  }
  return soup.to_surface();
}

}  // namespace bic
