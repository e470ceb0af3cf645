#include "mcf4/mesh.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

using namespace mcf4;

namespace {
// positive for outward-wound closed surfaces around the origin in the first
// three coordinates
double signed_volume_r3(const SurfaceMesh& mesh) {
  double vol = 0.0;
  for (auto [a, b, c] : mesh.triangles) {
    Vec3 p = mesh.positions[a].head<3>(), q = mesh.positions[b].head<3>(),
         r = mesh.positions[c].head<3>();
    vol += p.dot(q.cross(r)) / 6.0;
  }
  return vol;
}
}  // namespace

TEST_CASE("icosphere: counts, closedness, outward winding") {
  for (int level : {0, 1, 2, 3}) {
    SurfaceMesh mesh = sphere_in_euclidean4(level, 1.0);
    int f = 20 << (2 * level);
    CHECK(mesh.triangle_count() == f);
    CHECK(mesh.vertex_count() == f / 2 + 2);
    validate_mesh(mesh, AmbientModel::euclidean4());
    CHECK(signed_volume_r3(mesh) > 0.0);
    CHECK(min_triangle_angle(mesh) > 0.4);
  }
}

TEST_CASE("sphere area converges to 4*pi at second order") {
  double e3 = std::abs(area(sphere_in_euclidean4(3, 1.0)) - 4.0 * std::numbers::pi);
  double e4 = std::abs(area(sphere_in_euclidean4(4, 1.0)) - 4.0 * std::numbers::pi);
  CHECK(e3 / e4 >= std::pow(2.0, 1.8));
  // scaling: radius r multiplies area by r^2
  CHECK(area(sphere_in_euclidean4(3, 2.0)) ==
        doctest::Approx(4.0 * area(sphere_in_euclidean4(3, 1.0))).epsilon(1e-12));
}

TEST_CASE("sphere_factor1 sits on the product manifold") {
  auto ambient = AmbientModel::product_spheres(1.0, 2.0);
  SurfaceMesh mesh = sphere_factor1(3, ambient);
  validate_mesh(mesh, ambient);
  CHECK(area(mesh) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-2));
}

TEST_CASE("clifford torus: closed, consistent, flat area") {
  SurfaceMesh torus = clifford_torus(48, 32, 1.0, 0.5);
  validate_mesh(torus, AmbientModel::euclidean4());
  long v = torus.vertex_count(), f = torus.triangle_count(), e = 3 * f / 2;
  CHECK(v - e + f == 0);
  double exact = 4.0 * std::numbers::pi * std::numbers::pi * 1.0 * 0.5;
  CHECK(area(torus) == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("validate_mesh rejects bad meshes") {
  SurfaceMesh mesh = sphere_in_euclidean4(1, 1.0);
  SurfaceMesh flipped = mesh;
  std::swap(flipped.triangles[0][0], flipped.triangles[0][1]);
  CHECK_THROWS_AS(validate_mesh(flipped, AmbientModel::euclidean4()), ValidationError);

  SurfaceMesh open_mesh = mesh;
  open_mesh.triangles.pop_back();
  CHECK_THROWS_AS(validate_mesh(open_mesh, AmbientModel::euclidean4()), ValidationError);

  auto ambient = AmbientModel::product_spheres(1.0, 1.0);
  SurfaceMesh off = sphere_factor1(1, ambient);
  off.positions[3] *= 1.01;
  CHECK_THROWS_AS(validate_mesh(off, ambient), ValidationError);
}

TEST_CASE("connectivity: ring sizes and edge opposites") {
  SurfaceMesh mesh = sphere_in_euclidean4(2, 1.0);
  auto conn = build_connectivity(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    size_t deg = conn.one_ring[v].size();
    CHECK(deg >= 5);
    CHECK(deg <= 6);
    CHECK(conn.two_ring[v].size() >= 15);
    CHECK(conn.vertex_triangles[v].size() == deg);
  }
  CHECK(static_cast<long>(conn.edges.size()) == 3L * mesh.triangle_count() / 2);
  for (auto [o1, o2] : conn.edge_opposite) {
    CHECK(o1 >= 0);
    CHECK(o2 >= 0);
  }
}

TEST_CASE("snapshot JSON-lines roundtrip is exact") {
  SurfaceMesh mesh = sphere_in_euclidean4(1, 1.37, Vec4(0.1, -0.2, 0.3, 0.77));
  std::stringstream ss;
  write_snapshot(ss, 0.0, mesh);
  write_snapshot(ss, 0.125, mesh);
  auto snaps = read_snapshots(ss);
  REQUIRE(snaps.size() == 2);
  CHECK(snaps[1].t == 0.125);
  CHECK(snaps[0].mesh.ambient_dim == 4);
  CHECK(snaps[0].mesh.topology == SurfaceMesh::Topology::Sphere);
  REQUIRE(snaps[0].mesh.vertex_count() == mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK((snaps[0].mesh.positions[v] - mesh.positions[v]).norm() == 0.0);
  }
  CHECK(snaps[0].mesh.triangles == mesh.triangles);

  SurfaceMesh torus = clifford_torus(6, 6, 1.0, 0.5);
  std::stringstream st;
  write_snapshot(st, 1.0, torus);
  auto tsnap = read_snapshots(st);
  CHECK(tsnap[0].mesh.topology == SurfaceMesh::Topology::Torus);
}
