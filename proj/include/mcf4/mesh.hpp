#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mcf4/ambient.hpp"
#include "mcf4/types.hpp"

namespace mcf4 {

/// Closed oriented triangle mesh immersed in the ambient manifold. Triangle
/// winding carries the surface orientation.
struct SurfaceMesh {
  enum class Topology { Sphere, Torus };
  int ambient_dim = 4;
  Topology topology = Topology::Sphere;
  std::vector<Vec6> positions;
  std::vector<std::array<int, 3>> triangles;

  int vertex_count() const { return static_cast<int>(positions.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

struct MeshConnectivity {
  std::vector<std::vector<int>> one_ring;          // neighbor vertices, sorted
  std::vector<std::vector<int>> two_ring;          // 1- and 2-ring, sorted, no self
  std::vector<std::vector<int>> vertex_triangles;  // incident triangle indices
  std::vector<std::array<int, 2>> edges;           // undirected, i < j
  std::vector<std::array<int, 2>> edge_opposite;   // the two opposite vertices
};

MeshConnectivity build_connectivity(const SurfaceMesh& mesh);

/// Checks: every edge shared by exactly two triangles with opposite
/// directions (closed + consistently wound), all vertices on M.
void validate_mesh(const SurfaceMesh& mesh, const AmbientModel& ambient);

/// Unit icosahedral sphere in R^3, `level` midpoint subdivisions
/// (20 * 4^level triangles), outward winding.
void icosphere_r3(int level, std::vector<Vec3>& vertices,
                  std::vector<std::array<int, 3>>& triangles);

/// Round 2-sphere of radius r centered at `center`, lying in the coordinate
/// 3-space spanned by the first three axes of euclidean4.
SurfaceMesh sphere_in_euclidean4(int level, double r, const Vec4& center = Vec4::Zero());

/// S^2(r1) x {r2 * p2hat} inside the product of spheres.
SurfaceMesh sphere_factor1(int level, const AmbientModel& ambient,
                           const Vec3& p2hat = Vec3(0, 0, 1));

/// Flat torus (a cos u, a sin u, b cos v, b sin v) in euclidean4 on an
/// nu x nv periodic grid.
SurfaceMesh clifford_torus(int nu, int nv, double a, double b);

double triangle_area(const Vec6& p, const Vec6& q, const Vec6& r);
double area(const SurfaceMesh& mesh);
double min_edge_length(const SurfaceMesh& mesh);
double mean_edge_length(const SurfaceMesh& mesh);
double min_triangle_angle(const SurfaceMesh& mesh);  // radians

/// Barycentric vertex areas (triangle area / 3 to each corner).
std::vector<double> vertex_areas(const SurfaceMesh& mesh);

struct Snapshot {
  double t = 0.0;
  SurfaceMesh mesh;
};

/// JSON-lines snapshot record: {"t", "N", "vertices", "triangles"}.
void write_snapshot(std::ostream& os, double t, const SurfaceMesh& mesh);
std::vector<Snapshot> read_snapshots(std::istream& is);

}  // namespace mcf4
