#include "mcf4/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"

namespace mcf4 {

MeshConnectivity build_connectivity(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  MeshConnectivity conn;
  conn.one_ring.resize(nv);
  conn.two_ring.resize(nv);
  conn.vertex_triangles.resize(nv);

  std::map<std::array<int, 2>, std::vector<int>> edge_opp;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto [a, b, c] = mesh.triangles[t];
    for (auto [u, v, w] : {std::array{a, b, c}, std::array{b, c, a}, std::array{c, a, b}}) {
      conn.one_ring[u].push_back(v);
      conn.vertex_triangles[u].push_back(t);
      std::array<int, 2> key{std::min(u, v), std::max(u, v)};
      edge_opp[key].push_back(w);
    }
  }
  for (int v = 0; v < nv; ++v) {
    auto& ring = conn.one_ring[v];
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    auto& vt = conn.vertex_triangles[v];
    std::sort(vt.begin(), vt.end());
    vt.erase(std::unique(vt.begin(), vt.end()), vt.end());
  }
  for (int v = 0; v < nv; ++v) {
    std::set<int> acc(conn.one_ring[v].begin(), conn.one_ring[v].end());
    for (int n : conn.one_ring[v]) acc.insert(conn.one_ring[n].begin(), conn.one_ring[n].end());
    acc.erase(v);
    conn.two_ring[v].assign(acc.begin(), acc.end());
  }
  conn.edges.reserve(edge_opp.size());
  conn.edge_opposite.reserve(edge_opp.size());
  for (auto& [e, opps] : edge_opp) {
    conn.edges.push_back(e);
    std::array<int, 2> o{-1, -1};
    for (size_t i = 0; i < opps.size() && i < 2; ++i) o[i] = opps[i];
    conn.edge_opposite.push_back(o);
  }
  return conn;
}

void validate_mesh(const SurfaceMesh& mesh, const AmbientModel& ambient) {
  if (mesh.ambient_dim != ambient.embedding_dim()) {
    throw ValidationError("mesh ambient_dim does not match the ambient model");
  }
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!ambient.on_manifold(mesh.positions[v], 1e-9)) {
      throw ValidationError("mesh vertex " + std::to_string(v) + " is off the manifold");
    }
  }
  // each directed edge must appear exactly once (closed + consistent winding)
  std::set<std::pair<int, int>> directed;
  for (const auto& tri : mesh.triangles) {
    auto [a, b, c] = tri;
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
      if (!directed.insert({u, v}).second) {
        throw ValidationError("directed edge repeated: inconsistent winding or non-manifold");
      }
    }
  }
  for (auto [u, v] : directed) {
    if (!directed.count({v, u})) {
      throw ValidationError("boundary edge found: surface is not closed");
    }
  }
}

void icosphere_r3(int level, std::vector<Vec3>& vertices,
                  std::vector<std::array<int, 3>>& triangles) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
      {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
      {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
      {8, 6, 7},  {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (v[a] + v[b]).normalized();
      v.push_back(m);
      int idx = static_cast<int>(v.size()) - 1;
      midpoint[key] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (auto [a, b, c] : f) {
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  vertices = std::move(v);
  triangles = std::move(f);
}

SurfaceMesh sphere_in_euclidean4(int level, double r, const Vec4& center) {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  icosphere_r3(level, verts, tris);
  SurfaceMesh mesh;
  mesh.ambient_dim = 4;
  mesh.topology = SurfaceMesh::Topology::Sphere;
  mesh.triangles = std::move(tris);
  mesh.positions.reserve(verts.size());
  for (const Vec3& p : verts) {
    Vec4 q = center;
    q.head<3>() += r * p;
    mesh.positions.push_back(embed4(q));
  }
  return mesh;
}

SurfaceMesh sphere_factor1(int level, const AmbientModel& ambient, const Vec3& p2hat) {
  if (ambient.kind() != AmbientKind::ProductSpheres) {
    throw ValidationError("sphere_factor1 requires a product-of-spheres ambient");
  }
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  icosphere_r3(level, verts, tris);
  SurfaceMesh mesh;
  mesh.ambient_dim = 6;
  mesh.topology = SurfaceMesh::Topology::Sphere;
  mesh.triangles = std::move(tris);
  Vec3 p2 = ambient.r2() * p2hat.normalized();
  mesh.positions.reserve(verts.size());
  for (const Vec3& p : verts) mesh.positions.push_back(assemble(ambient.r1() * p, p2));
  return mesh;
}

SurfaceMesh clifford_torus(int nu, int nv, double a, double b) {
  if (nu < 3 || nv < 3) throw ValidationError("clifford_torus grid must be at least 3x3");
  SurfaceMesh mesh;
  mesh.ambient_dim = 4;
  mesh.topology = SurfaceMesh::Topology::Torus;
  mesh.positions.reserve(static_cast<size_t>(nu) * nv);
  const double tau = 2.0 * std::numbers::pi;
  for (int i = 0; i < nu; ++i) {
    double u = tau * i / nu;
    for (int j = 0; j < nv; ++j) {
      double w = tau * j / nv;
      mesh.positions.push_back(
          embed4(Vec4(a * std::cos(u), a * std::sin(u), b * std::cos(w), b * std::sin(w))));
    }
  }
  auto idx = [&](int i, int j) { return ((i + nu) % nu) * nv + ((j + nv) % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      mesh.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      mesh.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  return mesh;
}

double triangle_area(const Vec6& p, const Vec6& q, const Vec6& r) {
  Vec6 u = q - p, v = r - p;
  double g11 = u.squaredNorm(), g22 = v.squaredNorm(), g12 = u.dot(v);
  double det = g11 * g22 - g12 * g12;
  return 0.5 * std::sqrt(std::max(det, 0.0));
}

double area(const SurfaceMesh& mesh) {
  // compensated sum keeps reruns bit-identical regardless of magnitude spread
  double sum = 0.0, comp = 0.0;
  for (const auto& [a, b, c] : mesh.triangles) {
    double t = triangle_area(mesh.positions[a], mesh.positions[b], mesh.positions[c]);
    double y = t - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

double min_edge_length(const SurfaceMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b, c] : mesh.triangles) {
    best = std::min(best, (mesh.positions[a] - mesh.positions[b]).norm());
    best = std::min(best, (mesh.positions[b] - mesh.positions[c]).norm());
    best = std::min(best, (mesh.positions[c] - mesh.positions[a]).norm());
  }
  return best;
}

double mean_edge_length(const SurfaceMesh& mesh) {
  double sum = 0.0;
  long n = 0;
  for (const auto& [a, b, c] : mesh.triangles) {
    sum += (mesh.positions[a] - mesh.positions[b]).norm();
    sum += (mesh.positions[b] - mesh.positions[c]).norm();
    sum += (mesh.positions[c] - mesh.positions[a]).norm();
    n += 3;
  }
  return sum / static_cast<double>(n);
}

double min_triangle_angle(const SurfaceMesh& mesh) {
  double best = std::numbers::pi;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec6& p = mesh.positions[tri[k]];
      const Vec6& q = mesh.positions[tri[(k + 1) % 3]];
      const Vec6& r = mesh.positions[tri[(k + 2) % 3]];
      Vec6 u = q - p, v = r - p;
      double c = u.dot(v) / (u.norm() * v.norm());
      best = std::min(best, std::acos(std::clamp(c, -1.0, 1.0)));
    }
  }
  return best;
}

std::vector<double> vertex_areas(const SurfaceMesh& mesh) {
  std::vector<double> areas(mesh.vertex_count(), 0.0);
  for (const auto& [a, b, c] : mesh.triangles) {
    double t = triangle_area(mesh.positions[a], mesh.positions[b], mesh.positions[c]) / 3.0;
    areas[a] += t;
    areas[b] += t;
    areas[c] += t;
  }
  return areas;
}

void write_snapshot(std::ostream& os, double t, const SurfaceMesh& mesh) {
  nlohmann::json rec;
  rec["t"] = t;
  rec["N"] = mesh.ambient_dim;
  auto& verts = rec["vertices"] = nlohmann::json::array();
  for (const Vec6& p : mesh.positions) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < mesh.ambient_dim; ++i) row.push_back(p(i));
    verts.push_back(std::move(row));
  }
  auto& tris = rec["triangles"] = nlohmann::json::array();
  for (const auto& [a, b, c] : mesh.triangles) tris.push_back({a, b, c});
  os << rec.dump() << "\n";
}

std::vector<Snapshot> read_snapshots(std::istream& is) {
  std::vector<Snapshot> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    Snapshot snap;
    snap.t = rec.at("t").get<double>();
    snap.mesh.ambient_dim = rec.at("N").get<int>();
    for (const auto& row : rec.at("vertices")) {
      Vec6 p = Vec6::Zero();
      for (int i = 0; i < snap.mesh.ambient_dim; ++i) p(i) = row.at(i).get<double>();
      snap.mesh.positions.push_back(p);
    }
    for (const auto& row : rec.at("triangles")) {
      snap.mesh.triangles.push_back({row.at(0).get<int>(), row.at(1).get<int>(),
                                     row.at(2).get<int>()});
    }
    long v = snap.mesh.vertex_count(), f = snap.mesh.triangle_count();
    long e = (3 * f) / 2;
    snap.mesh.topology = (v - e + f == 2) ? SurfaceMesh::Topology::Sphere
                                          : SurfaceMesh::Topology::Torus;
    out.push_back(std::move(snap));
  }
  return out;
}

}  // namespace mcf4
