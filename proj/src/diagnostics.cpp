#include "mcf4/diagnostics.hpp"

#include <cmath>
#include <numbers>

namespace mcf4 {

double backward_kernel(const Vec6& y, double t, const KernelProbe& probe) {
  double tau = probe.t0 - t;
  if (!(tau > 0.0)) throw ValidationError("backward kernel evaluated at or after t0");
  double d2 = (y - probe.y0).squaredNorm();
  return std::exp(-d2 / (4.0 * tau)) / (4.0 * std::numbers::pi * tau);
}

double cutoff_psi(double dist, double r) {
  if (dist <= 0.5 * r) return 1.0;
  if (dist >= r) return 0.0;
  double s = std::cos(std::numbers::pi * (dist - 0.5 * r) / r);
  return s * s;
}

namespace {

double windowed_kernel(const Vec6& y, double t, const KernelProbe& probe) {
  double rho = backward_kernel(y, t, probe);
  if (probe.cutoff_r) rho *= cutoff_psi((y - probe.y0).norm(), *probe.cutoff_r);
  return rho;
}

// quadrature over one mesh of an integrand evaluated at quadrature points;
// upgrades from centroid to the degree-2 midpoint rule when the kernel is
// narrower than the mesh scale
template <typename F>
double kernel_quadrature(const SurfaceMesh& mesh, double t, const KernelProbe& probe, F&& f) {
  double tau = probe.t0 - t;
  if (!(tau > 0.0)) throw ValidationError("snapshot at or after the probe time t0");
  double h = mean_edge_length(mesh);
  bool fine = tau < h * h;

  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    double y = x - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  };
  for (const auto& [a, b, c] : mesh.triangles) {
    const Vec6& pa = mesh.positions[a];
    const Vec6& pb = mesh.positions[b];
    const Vec6& pc = mesh.positions[c];
    double tri = triangle_area(pa, pb, pc);
    if (!fine) {
      add(tri * f((pa + pb + pc) / 3.0, a, b, c, Vec3(1, 1, 1) / 3.0));
    } else {
      add(tri / 3.0 * f(0.5 * (pa + pb), a, b, c, Vec3(0.5, 0.5, 0.0)));
      add(tri / 3.0 * f(0.5 * (pb + pc), a, b, c, Vec3(0.0, 0.5, 0.5)));
      add(tri / 3.0 * f(0.5 * (pc + pa), a, b, c, Vec3(0.5, 0.0, 0.5)));
    }
  }
  return sum;
}

}  // namespace

double gaussian_density(const SurfaceMesh& mesh, double t, const KernelProbe& probe) {
  return kernel_quadrature(mesh, t, probe,
                           [&](const Vec6& y, int, int, int, const Vec3&) {
                             return windowed_kernel(y, t, probe);
                           });
}

std::vector<double> gaussian_density_series(const std::vector<Snapshot>& snapshots,
                                            const KernelProbe& probe) {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& snap : snapshots) out.push_back(gaussian_density(snap.mesh, snap.t, probe));
  return out;
}

MonotonicityReport huisken_monotonicity_check(const std::vector<Snapshot>& snapshots,
                                              const KernelProbe& probe) {
  MonotonicityReport report;
  report.series = gaussian_density_series(snapshots, probe);
  for (size_t i = 1; i < report.series.size(); ++i) {
    report.max_upward = std::max(report.max_upward, report.series[i] - report.series[i - 1]);
  }
  return report;
}

double eta_evolution_residual(const SurfaceState& before, const SurfaceState& after,
                              const MeshConnectivity& conn, const AmbientModel& ambient,
                              CalibForm form) {
  const SurfaceMesh& mesh = *before.mesh;
  if (after.mesh->vertex_count() != mesh.vertex_count() ||
      after.mesh->triangles != mesh.triangles) {
    throw ValidationError("eta_evolution_residual: states have different connectivity");
  }
  double dt = after.t - before.t;
  if (!(dt > 0.0)) throw ValidationError("eta_evolution_residual: states must be ordered in time");

  const int nv = mesh.vertex_count();
  std::vector<double> eta_b(nv), eta_a(nv);
  for (int v = 0; v < nv; ++v) {
    eta_b[v] = eta_of((*before.shapes)[v], ambient, mesh.positions[v], form);
    eta_a[v] = eta_of((*after.shapes)[v], ambient, after.mesh->positions[v], form);
  }
  CotanLaplacian lap = build_cotan_laplacian(mesh, conn);
  std::vector<double> lap_eta = lap.apply(eta_b);

  double num = 0.0, den = 0.0;
  for (int v = 0; v < nv; ++v) {
    const ShapeData& d = (*before.shapes)[v];
    const Vec6& p = mesh.positions[v];
    AdaptedShape ad = adapt_to_form(d, ambient, p, form);
    double bracket = curvature_bracket(ad);
    double ric = ambient.ricci(p, ambient.apply_J(p, form, d.e1), d.e2);
    double rhs = lap_eta[v] + eta_b[v] * bracket + (1.0 - eta_b[v] * eta_b[v]) * ric;
    double resid = (eta_a[v] - eta_b[v]) / dt - rhs;
    num += lap.vertex_area[v] * resid * resid;
    den += lap.vertex_area[v];
  }
  return std::sqrt(num / den);
}

double LocalizedSeries::max_violation(double C) const {
  double worst = 0.0;
  for (size_t i = 1; i < value.size(); ++i) {
    double dt = t[i] - t[i - 1];
    worst = std::max(worst, (value[i] - value[i - 1]) - C * dt);
  }
  return worst;
}

LocalizedSeries localized_monotone_quantity(const std::vector<Snapshot>& snapshots,
                                            const AmbientModel& ambient,
                                            const KernelProbe& probe, CalibForm form) {
  LocalizedSeries out;
  for (const auto& snap : snapshots) {
    MeshConnectivity conn = build_connectivity(snap.mesh);
    auto shapes = shape_data_all(snap.mesh, conn, ambient);
    const int nv = snap.mesh.vertex_count();
    std::vector<double> one_minus_eta(nv), bracket(nv);
    for (int v = 0; v < nv; ++v) {
      const Vec6& p = snap.mesh.positions[v];
      one_minus_eta[v] = 1.0 - eta_of(shapes[v], ambient, p, form);
      bracket[v] = curvature_bracket(adapt_to_form(shapes[v], ambient, p, form));
    }
    auto interp = [](const std::vector<double>& f, int a, int b, int c, const Vec3& w) {
      return w(0) * f[a] + w(1) * f[b] + w(2) * f[c];
    };
    double val = kernel_quadrature(snap.mesh, snap.t, probe,
                                   [&](const Vec6& y, int a, int b, int c, const Vec3& w) {
                                     return windowed_kernel(y, snap.t, probe) *
                                            interp(one_minus_eta, a, b, c, w);
                                   });
    double comp = kernel_quadrature(snap.mesh, snap.t, probe,
                                    [&](const Vec6& y, int a, int b, int c, const Vec3& w) {
                                      return windowed_kernel(y, snap.t, probe) *
                                             interp(bracket, a, b, c, w);
                                    });
    out.t.push_back(snap.t);
    out.value.push_back(val);
    out.companion.push_back(comp);
  }
  return out;
}

MinEtaReport min_eta_monotonicity(const std::vector<DiagnosticsRecord>& records,
                                  const AmbientModel& ambient, CalibForm form) {
  double c = ambient.einstein_constant();  // throws when undefined
  if (c < 0.0) {
    throw ValidationError("min_eta_monotonicity requires non-negative Einstein constant");
  }
  MinEtaReport report;
  report.series.reserve(records.size());
  for (const auto& r : records) {
    report.series.push_back(form == CalibForm::OmegaDoublePrime ? r.min_eta2 : r.min_eta1);
  }
  for (size_t i = 1; i < report.series.size(); ++i) {
    report.max_drop = std::max(report.max_drop, report.series[i - 1] - report.series[i]);
  }
  return report;
}

double sff_evolution_residual(const SurfaceState& before, const SurfaceState& after,
                              const MeshConnectivity& conn, const AmbientModel& ambient) {
  const SurfaceMesh& mesh = *before.mesh;
  if (after.mesh->vertex_count() != mesh.vertex_count()) {
    throw ValidationError("sff_evolution_residual: states have different connectivity");
  }
  double dt = after.t - before.t;
  if (!(dt > 0.0)) throw ValidationError("sff_evolution_residual: states must be ordered");

  // loose curvature constants; the curvature tensor of both models is
  // parallel, so no derivative terms enter
  double k1 = 0.0;
  if (ambient.kind() == AmbientKind::ProductSpheres) {
    double kmax = std::max(1.0 / (ambient.r1() * ambient.r1()),
                           1.0 / (ambient.r2() * ambient.r2()));
    k1 = 40.0 * kmax;
  }

  CotanLaplacian lap = build_cotan_laplacian(mesh, conn);
  const int nv = mesh.vertex_count();
  std::vector<double> a2(nv);
  for (int v = 0; v < nv; ++v) a2[v] = (*before.shapes)[v].A2;
  std::vector<double> lap_a2 = lap.apply(a2);

  double lhs = 0.0, rhs = 0.0;
  for (int v = 0; v < nv; ++v) {
    double w = lap.vertex_area[v];
    lhs += w * ((*after.shapes)[v].A2 - a2[v]) / dt;
    rhs += w * (lap_a2[v] + 4.0 * a2[v] * a2[v] + k1 * a2[v]);
  }
  return lhs - rhs;  // positive = violation of the integrated inequality
}

std::vector<Snapshot> parabolic_dilation(const std::vector<Snapshot>& snapshots, const Vec6& y0,
                                         double t0, double lambda) {
  std::vector<Snapshot> out = snapshots;
  for (auto& snap : out) {
    for (auto& p : snap.mesh.positions) p = lambda * (p - y0);
    snap.t = lambda * lambda * (snap.t - t0);
  }
  return out;
}

}  // namespace mcf4
