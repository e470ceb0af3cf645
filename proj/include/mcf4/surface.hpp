#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mcf4/forms.hpp"
#include "mcf4/mesh.hpp"

// Discrete differential geometry of the immersed surface: least-squares jet
// fits for frames and second fundamental forms, pull-back quantities of the
// parallel forms, graph immersions, gradients and the Laplace-Beltrami
// operator.

namespace mcf4 {

/// Per-vertex shape data. {e1, e2} is an oriented orthonormal tangent frame
/// (d mu(e1, e2) > 0), {e3, e4} an orthonormal basis of the normal space
/// inside TM, oriented so that the omega'-components have positive Pfaffian.
struct ShapeData {
  Vec6 e1, e2, e3, e4;
  Mat2 h3, h4;        // h_{alpha i j} = <A(e_i, e_j), e_alpha>
  Vec6 H;             // mean curvature vector of the surface in M
  Vec6 Hbar;          // mean curvature vector in R^N
  double A2 = 0.0;    // |A|^2 (normal-in-M components)
  double eta1 = 0.0;  // *omega'
  double eta2 = 0.0;  // *omega''
};

struct ShapeOptions {
  int fit_degree = 2;  // 2 (default) or 3
};

ShapeData shape_data(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                     const AmbientModel& ambient, int vertex, const ShapeOptions& opts = {});

std::vector<ShapeData> shape_data_all(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                      const AmbientModel& ambient,
                                      const ShapeOptions& opts = {});

/// eta = w(e1, e2) for a form given by its components in the data's frame.
double pullback_eta(const ShapeData& data, const forms::TwoForm4& form_in_frame);

double eta_of(const ShapeData& data, const AmbientModel& ambient, const AmbientPoint& p,
              CalibForm form);

/// h components rotated into the frame adapted to `form`, i.e. the frame in
/// which the form has components ((0,eta,zeta,0),(-eta,0,0,-zeta),...).
struct AdaptedShape {
  Mat2 h3, h4;
  double eta = 0.0;
  bool degenerate = false;  // |eta| = 1; adapted frame undefined
};
AdaptedShape adapt_to_form(const ShapeData& data, const AmbientModel& ambient,
                           const AmbientPoint& p, CalibForm form);

/// sum_k (h_{31k} - h_{42k})^2 + (h_{32k} + h_{41k})^2 in the adapted gauge.
double curvature_bracket(const AdaptedShape& a);

/// Area-weighted per-vertex gradient of a vertex scalar field (ambient
/// vector, tangent to the triangles around the vertex).
std::vector<Vec6> surface_gradient(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                   const std::vector<double>& f);

/// |grad eta - sqrt(1-eta^2)(h_{41k} + h_{32k}) e_k| per vertex.
std::vector<double> eta_gradient_residual(const SurfaceMesh& mesh,
                                          const MeshConnectivity& conn,
                                          const std::vector<ShapeData>& shapes,
                                          const AmbientModel& ambient, CalibForm form);

double min_eta(const SurfaceMesh& mesh, const std::vector<ShapeData>& shapes,
               const AmbientModel& ambient, CalibForm form);

/// Map between unit spheres sampled at the vertices of an icosahedral source
/// mesh; immersed as a graph in S^2(r1) x S^2(r2).
struct GraphMap {
  std::vector<Vec3> source;                    // unit vectors
  std::vector<std::array<int, 3>> triangles;   // source connectivity
  std::vector<Vec3> values;                    // unit vectors, |f(v)| = 1
  double r1 = 1.0;
  double r2 = 1.0;
};

GraphMap sample_graph_map(int level, const std::function<Vec3(const Vec3&)>& f, double r1 = 1.0,
                          double r2 = 1.0);

/// Exponential map of the unit sphere: exp_p(w) for w tangent at p.
Vec3 sphere_exp(const Vec3& p, const Vec3& w);

SurfaceMesh graph_immersion(const GraphMap& map);

/// Signed Jacobian of the map with respect to the round area forms of the
/// unit spheres, from a least-squares fit of the discrete differential.
double jacobian(const GraphMap& map, const MeshConnectivity& conn, int vertex);
std::vector<double> jacobian_all(const GraphMap& map);

/// Jacobians recovered from an evolved graph mesh in the product ambient,
/// reading each vertex (y1, y2) as a map sample y1/r1 -> y2/r2.
std::vector<double> graph_jacobian_from_mesh(const SurfaceMesh& mesh,
                                             const MeshConnectivity& conn, double r1, double r2);

/// Cotangent Laplace-Beltrami with mixed Voronoi vertex areas.
struct CotanLaplacian {
  std::vector<double> vertex_area;
  std::vector<std::vector<std::pair<int, double>>> weights;  // (neighbor, w)
  std::vector<double> apply(const std::vector<double>& f) const;
};
CotanLaplacian build_cotan_laplacian(const SurfaceMesh& mesh, const MeshConnectivity& conn);

}  // namespace mcf4
