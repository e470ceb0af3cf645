#include "mcf4/surface.hpp"

#include <cmath>
#include <string>

namespace mcf4 {

namespace {

// <x^y, z^w>
double bivector_dot(const Vec6& x, const Vec6& y, const Vec6& z, const Vec6& w) {
  return x.dot(z) * y.dot(w) - x.dot(w) * y.dot(z);
}

struct JetFit {
  Vec6 t1, t2;          // orthonormal tangent estimate
  Vec6 c20, c11, c02;   // second derivative vectors of the graph
};

// Least-squares jet of the 2-ring around the vertex: positions are fitted as
// p + u t1 + v t2 + w(u, v) with w normal-valued and quadratic (or cubic; the
// cubic terms only stabilize the quadratic ones). The tangent plane is
// re-estimated from the linear coefficients until it settles.
JetFit fit_jet(const SurfaceMesh& mesh, const MeshConnectivity& conn, int vertex,
               const ShapeOptions& opts) {
  const auto& ring = conn.two_ring[vertex];
  const int degree = opts.fit_degree;
  const int ncoef = degree >= 3 ? 9 : 5;
  if (static_cast<int>(conn.one_ring[vertex].size()) < 5 ||
      static_cast<int>(ring.size()) < ncoef + 1) {
    throw StencilError("jet fit stencil too small at vertex " + std::to_string(vertex));
  }
  const Vec6 p = mesh.positions[vertex];
  const int m = static_cast<int>(ring.size());

  Eigen::MatrixXd deltas(m, 6);
  for (int r = 0; r < m; ++r) deltas.row(r) = (mesh.positions[ring[r]] - p).transpose();

  // initial tangent plane from the covariance of the stencil
  Eigen::Matrix<double, 6, 6> cov = deltas.transpose() * deltas;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(cov);
  Vec6 t1 = eig.eigenvectors().col(5);
  Vec6 t2 = eig.eigenvectors().col(4);

  // align (t1, t2) with the triangle winding around the vertex
  double orient = 0.0;
  for (int t : conn.vertex_triangles[vertex]) {
    auto [a, b, c] = mesh.triangles[t];
    Vec6 u = mesh.positions[b] - mesh.positions[a];
    Vec6 v = mesh.positions[c] - mesh.positions[a];
    orient += bivector_dot(u, v, t1, t2);
  }
  if (orient < 0.0) t2 = -t2;

  Eigen::MatrixXd design(m, ncoef);
  Eigen::MatrixXd coef;
  for (int iter = 0; iter < 6; ++iter) {
    for (int r = 0; r < m; ++r) {
      double u = deltas.row(r).dot(t1);
      double v = deltas.row(r).dot(t2);
      design(r, 0) = u;
      design(r, 1) = v;
      design(r, 2) = 0.5 * u * u;
      design(r, 3) = u * v;
      design(r, 4) = 0.5 * v * v;
      if (degree >= 3) {
        design(r, 5) = u * u * u;
        design(r, 6) = u * u * v;
        design(r, 7) = u * v * v;
        design(r, 8) = v * v * v;
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < ncoef) {
      throw StencilError("rank-deficient jet fit at vertex " + std::to_string(vertex));
    }
    coef = qr.solve(deltas);
    Vec6 b1 = coef.row(0);
    Vec6 b2 = coef.row(1);
    // the residual linear terms tilt the tangent plane estimate
    Vec6 n1 = (t1 + (b1 - b1.dot(t1) * t1 - b1.dot(t2) * t2)).normalized();
    Vec6 n2 = t2 + (b2 - b2.dot(t1) * t1 - b2.dot(t2) * t2);
    n2 = (n2 - n2.dot(n1) * n1).normalized();
    double move = std::max((n1 - t1).norm(), (n2 - t2).norm());
    t1 = n1;
    t2 = n2;
    if (move < 1e-14) break;
  }

  JetFit out;
  out.t1 = t1;
  out.t2 = t2;
  out.c20 = coef.row(2);
  out.c11 = coef.row(3);
  out.c02 = coef.row(4);
  return out;
}

}  // namespace

ShapeData shape_data(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                     const AmbientModel& ambient, int vertex, const ShapeOptions& opts) {
  JetFit jet = fit_jet(mesh, conn, vertex, opts);
  const Vec6& p = mesh.positions[vertex];

  // surface tangents constrained to TM (the fit leaves an O(h^2) tilt)
  Vec6 e1 = ambient.tangent_projection(p, jet.t1).normalized();
  Vec6 e2 = ambient.tangent_projection(p, jet.t2);
  e2 = (e2 - e2.dot(e1) * e1).normalized();

  // rotate the fitted Hessian into the adjusted tangent pair
  Mat2 rot;
  rot << e1.dot(jet.t1), e1.dot(jet.t2), e2.dot(jet.t1), e2.dot(jet.t2);
  auto hess = [&](int i, int j) -> Vec6 {
    if (i == 0 && j == 0) return jet.c20;
    if (i == 1 && j == 1) return jet.c02;
    return jet.c11;
  };
  std::array<std::array<Vec6, 2>, 2> c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Vec6 acc = Vec6::Zero();
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) acc += rot(i, k) * rot(j, l) * hess(k, l);
      c[i][j] = acc;
    }

  // normal-in-M frame by Gram-Schmidt over deterministic tangent pivots
  ShapeData out;
  out.e1 = e1;
  out.e2 = e2;
  auto pivots = ambient.tangent_basis(p);
  int found = 0;
  Vec6 normals[2];
  for (int k = 0; k < 4 && found < 2; ++k) {
    Vec6 cand = pivots[k];
    cand -= cand.dot(e1) * e1 + cand.dot(e2) * e2;
    for (int j = 0; j < found; ++j) cand -= cand.dot(normals[j]) * normals[j];
    double n = cand.norm();
    if (n > 0.35) normals[found++] = cand / n;
  }
  if (found < 2) throw StencilError("degenerate normal frame at vertex " + std::to_string(vertex));
  out.e3 = normals[0];
  out.e4 = normals[1];
  // orient the 4-frame so the omega'-components have positive Pfaffian
  {
    std::array<Vec6, 4> fr{out.e1, out.e2, out.e3, out.e4};
    auto [wp, unused] = ambient.parallel_forms(p, fr);
    if (forms::pfaffian(wp) < 0.0) out.e4 = -out.e4;
  }

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.h3(i, j) = c[i][j].dot(out.e3);
      out.h4(i, j) = c[i][j].dot(out.e4);
    }
  // symmetrize away the last floating-point asymmetry
  out.h3 = 0.5 * (out.h3 + out.h3.transpose().eval());
  out.h4 = 0.5 * (out.h4 + out.h4.transpose().eval());

  out.H = (out.h3(0, 0) + out.h3(1, 1)) * out.e3 + (out.h4(0, 0) + out.h4(1, 1)) * out.e4;
  Vec6 hbar = c[0][0] + c[1][1];
  out.Hbar = hbar - hbar.dot(e1) * e1 - hbar.dot(e2) * e2;
  out.A2 = out.h3.squaredNorm() + out.h4.squaredNorm();
  out.eta1 = ambient.omega(p, CalibForm::OmegaPrime, out.e1, out.e2);
  out.eta2 = ambient.omega(p, CalibForm::OmegaDoublePrime, out.e1, out.e2);
  return out;
}

std::vector<ShapeData> shape_data_all(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                      const AmbientModel& ambient, const ShapeOptions& opts) {
  std::vector<ShapeData> out(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) out[v] = shape_data(mesh, conn, ambient, v, opts);
  return out;
}

double pullback_eta(const ShapeData&, const forms::TwoForm4& form_in_frame) {
  return form_in_frame.comp(0, 1);
}

double eta_of(const ShapeData& data, const AmbientModel& ambient, const AmbientPoint& p,
              CalibForm form) {
  switch (form) {
    case CalibForm::OmegaPrime:
      return data.eta1;
    case CalibForm::OmegaDoublePrime:
      return data.eta2;
    default:
      return ambient.omega(p, form, data.e1, data.e2);
  }
}

AdaptedShape adapt_to_form(const ShapeData& data, const AmbientModel& ambient,
                           const AmbientPoint& p, CalibForm form) {
  AdaptedShape out;
  out.eta = eta_of(data, ambient, p, form);
  double z2 = 1.0 - out.eta * out.eta;
  if (z2 < 1e-12) {
    out.degenerate = true;
    out.h3 = data.h3;
    out.h4 = data.h4;
    return out;
  }
  double z = std::sqrt(z2);
  Vec6 f3 = (ambient.apply_J(p, form, data.e1) - out.eta * data.e2) / z;
  Vec6 f4 = -(ambient.apply_J(p, form, data.e2) + out.eta * data.e1) / z;
  // change of normal basis (a rotation for omega', a reflection for omega'')
  Mat2 s;
  s << f3.dot(data.e3), f3.dot(data.e4), f4.dot(data.e3), f4.dot(data.e4);
  out.h3 = s(0, 0) * data.h3 + s(0, 1) * data.h4;
  out.h4 = s(1, 0) * data.h3 + s(1, 1) * data.h4;
  return out;
}

double curvature_bracket(const AdaptedShape& a) {
  double sum = 0.0;
  for (int k = 0; k < 2; ++k) {
    double b1 = a.h3(0, k) - a.h4(1, k);
    double b2 = a.h3(1, k) + a.h4(0, k);
    sum += b1 * b1 + b2 * b2;
  }
  return sum;
}

std::vector<Vec6> surface_gradient(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                   const std::vector<double>& f) {
  std::vector<Vec6> tri_grad(mesh.triangle_count(), Vec6::Zero());
  std::vector<double> tri_area(mesh.triangle_count(), 0.0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto [a, b, c] = mesh.triangles[t];
    Vec6 u = mesh.positions[b] - mesh.positions[a];
    Vec6 v = mesh.positions[c] - mesh.positions[a];
    Mat2 g;
    g << u.squaredNorm(), u.dot(v), u.dot(v), v.squaredNorm();
    Vec2 rhs(f[b] - f[a], f[c] - f[a]);
    Vec2 x = g.ldlt().solve(rhs);
    tri_grad[t] = x(0) * u + x(1) * v;
    tri_area[t] = triangle_area(mesh.positions[a], mesh.positions[b], mesh.positions[c]);
  }
  std::vector<Vec6> out(mesh.vertex_count(), Vec6::Zero());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double total = 0.0;
    for (int t : conn.vertex_triangles[v]) {
      out[v] += tri_area[t] * tri_grad[t];
      total += tri_area[t];
    }
    if (total > 0.0) out[v] /= total;
  }
  return out;
}

std::vector<double> eta_gradient_residual(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                          const std::vector<ShapeData>& shapes,
                                          const AmbientModel& ambient, CalibForm form) {
  std::vector<double> eta(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    eta[v] = eta_of(shapes[v], ambient, mesh.positions[v], form);
  std::vector<Vec6> grad = surface_gradient(mesh, conn, eta);

  std::vector<double> out(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const ShapeData& d = shapes[v];
    AdaptedShape a = adapt_to_form(d, ambient, mesh.positions[v], form);
    double g1 = grad[v].dot(d.e1);
    double g2 = grad[v].dot(d.e2);
    if (a.degenerate) {
      out[v] = std::hypot(g1, g2);
      continue;
    }
    double z = std::sqrt(1.0 - a.eta * a.eta);
    double r1 = g1 - z * (a.h4(0, 0) + a.h3(1, 0));
    double r2 = g2 - z * (a.h4(0, 1) + a.h3(1, 1));
    out[v] = std::hypot(r1, r2);
  }
  return out;
}

double min_eta(const SurfaceMesh& mesh, const std::vector<ShapeData>& shapes,
               const AmbientModel& ambient, CalibForm form) {
  double best = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.vertex_count(); ++v)
    best = std::min(best, eta_of(shapes[v], ambient, mesh.positions[v], form));
  return best;
}

GraphMap sample_graph_map(int level, const std::function<Vec3(const Vec3&)>& f, double r1,
                          double r2) {
  GraphMap map;
  map.r1 = r1;
  map.r2 = r2;
  icosphere_r3(level, map.source, map.triangles);
  map.values.reserve(map.source.size());
  for (const Vec3& v : map.source) {
    Vec3 w = f(v);
    if (std::abs(w.norm() - 1.0) > 1e-10) {
      throw ValidationError("graph map value is not a unit vector");
    }
    map.values.push_back(w);
  }
  return map;
}

Vec3 sphere_exp(const Vec3& p, const Vec3& w) {
  Vec3 t = w - w.dot(p) * p;
  double a = t.norm();
  if (a < 1e-300) return p;
  return (std::cos(a) * p + std::sin(a) * (t / a)).normalized();
}

SurfaceMesh graph_immersion(const GraphMap& map) {
  SurfaceMesh mesh;
  mesh.ambient_dim = 6;
  mesh.topology = SurfaceMesh::Topology::Sphere;
  mesh.triangles = map.triangles;
  mesh.positions.reserve(map.source.size());
  for (size_t v = 0; v < map.source.size(); ++v) {
    mesh.positions.push_back(assemble(map.r1 * map.source[v], map.r2 * map.values[v]));
  }
  return mesh;
}

namespace {

// positively oriented tangent basis of the unit sphere at n (b1 x b2 = n)
std::pair<Vec3, Vec3> sphere_basis(const Vec3& n) {
  Vec3 seed = std::abs(n.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  Vec3 b1 = seed.cross(n).normalized();
  Vec3 b2 = n.cross(b1);
  return {b1, b2};
}

double jacobian_from_samples(const Vec3& src, const Vec3& dst,
                             const std::vector<std::pair<Vec3, Vec3>>& steps, int vertex) {
  auto [s1, s2] = sphere_basis(src);
  auto [t1, t2] = sphere_basis(dst);
  Mat2 gram = Mat2::Zero();
  Mat2 mixed = Mat2::Zero();
  for (const auto& [du_raw, dw_raw] : steps) {
    Vec3 du3 = du_raw - du_raw.dot(src) * src;
    Vec3 dw3 = dw_raw - dw_raw.dot(dst) * dst;
    Vec2 du(du3.dot(s1), du3.dot(s2));
    Vec2 dw(dw3.dot(t1), dw3.dot(t2));
    gram += du * du.transpose();
    mixed += dw * du.transpose();
  }
  double det = gram.determinant();
  if (det < 1e-20) {
    throw StencilError("degenerate map stencil at vertex " + std::to_string(vertex));
  }
  Mat2 d = mixed * gram.inverse();
  return d.determinant();
}

}  // namespace

double jacobian(const GraphMap& map, const MeshConnectivity& conn, int vertex) {
  std::vector<std::pair<Vec3, Vec3>> steps;
  for (int n : conn.one_ring[vertex]) {
    steps.emplace_back(map.source[n] - map.source[vertex], map.values[n] - map.values[vertex]);
  }
  return jacobian_from_samples(map.source[vertex], map.values[vertex], steps, vertex);
}

std::vector<double> jacobian_all(const GraphMap& map) {
  SurfaceMesh src;
  src.ambient_dim = 6;
  src.positions.reserve(map.source.size());
  for (const Vec3& v : map.source) src.positions.push_back(assemble(v, Vec3::Zero()));
  src.triangles = map.triangles;
  MeshConnectivity conn = build_connectivity(src);
  std::vector<double> out(map.source.size());
  for (size_t v = 0; v < map.source.size(); ++v)
    out[v] = jacobian(map, conn, static_cast<int>(v));
  return out;
}

std::vector<double> graph_jacobian_from_mesh(const SurfaceMesh& mesh,
                                             const MeshConnectivity& conn, double r1,
                                             double r2) {
  std::vector<double> out(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    Vec3 src = factor1(mesh.positions[v]) / r1;
    Vec3 dst = factor2(mesh.positions[v]) / r2;
    std::vector<std::pair<Vec3, Vec3>> steps;
    for (int n : conn.one_ring[v]) {
      steps.emplace_back(factor1(mesh.positions[n]) / r1 - src,
                         factor2(mesh.positions[n]) / r2 - dst);
    }
    out[v] = jacobian_from_samples(src, dst, steps, v);
  }
  return out;
}

std::vector<double> CotanLaplacian::apply(const std::vector<double>& f) const {
  std::vector<double> out(f.size(), 0.0);
  for (size_t v = 0; v < f.size(); ++v) {
    double acc = 0.0;
    for (const auto& [n, w] : weights[v]) acc += w * (f[n] - f[v]);
    out[v] = acc / vertex_area[v];
  }
  return out;
}

CotanLaplacian build_cotan_laplacian(const SurfaceMesh& mesh, const MeshConnectivity& conn) {
  CotanLaplacian lap;
  const int nv = mesh.vertex_count();
  lap.vertex_area.assign(nv, 0.0);
  lap.weights.resize(nv);
  for (int v = 0; v < nv; ++v) lap.weights[v].reserve(conn.one_ring[v].size());

  // mixed Voronoi areas (obtuse triangles fall back to half / quarter area)
  for (const auto& tri : mesh.triangles) {
    std::array<Vec6, 3> p = {mesh.positions[tri[0]], mesh.positions[tri[1]],
                             mesh.positions[tri[2]]};
    std::array<double, 3> cot;
    bool obtuse = false;
    int obtuse_at = -1;
    for (int k = 0; k < 3; ++k) {
      Vec6 u = p[(k + 1) % 3] - p[k];
      Vec6 v = p[(k + 2) % 3] - p[k];
      double dot = u.dot(v);
      double cross2 = u.squaredNorm() * v.squaredNorm() - dot * dot;
      double cross = std::sqrt(std::max(cross2, 1e-300));
      cot[k] = dot / cross;
      if (dot < 0.0) {
        obtuse = true;
        obtuse_at = k;
      }
    }
    double a = triangle_area(p[0], p[1], p[2]);
    for (int k = 0; k < 3; ++k) {
      if (!obtuse) {
        double l1 = (p[(k + 1) % 3] - p[k]).squaredNorm();
        double l2 = (p[(k + 2) % 3] - p[k]).squaredNorm();
        lap.vertex_area[tri[k]] += (l1 * cot[(k + 2) % 3] + l2 * cot[(k + 1) % 3]) / 8.0;
      } else {
        lap.vertex_area[tri[k]] += (k == obtuse_at) ? a / 2.0 : a / 4.0;
      }
    }
  }

  for (size_t e = 0; e < conn.edges.size(); ++e) {
    auto [i, j] = conn.edges[e];
    auto [o1, o2] = conn.edge_opposite[e];
    double w = 0.0;
    for (int o : {o1, o2}) {
      if (o < 0) continue;
      Vec6 u = mesh.positions[i] - mesh.positions[o];
      Vec6 v = mesh.positions[j] - mesh.positions[o];
      double dot = u.dot(v);
      double cross2 = u.squaredNorm() * v.squaredNorm() - dot * dot;
      w += 0.5 * dot / std::sqrt(std::max(cross2, 1e-300));
    }
    lap.weights[i].emplace_back(j, w);
    lap.weights[j].emplace_back(i, w);
  }
  return lap;
}

}  // namespace mcf4
