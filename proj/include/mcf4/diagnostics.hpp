#pragma once

#include <optional>
#include <vector>

#include "mcf4/flow.hpp"
#include "mcf4/surface.hpp"

// The analytic quantities of the theory as numerical observables: Gaussian
// densities of the backward heat kernel, the evolution-equation residual of
// eta, localized monotone quantities and monotonicity reports.

namespace mcf4 {

/// Backward heat kernel probe at (y0, t0); the surface dimension n = 2 is
/// fixed. The optional cutoff is the window that is identically 1 inside
/// radius r/2 of y0 and vanishes beyond r.
struct KernelProbe {
  Vec6 y0 = Vec6::Zero();
  double t0 = 0.0;
  std::optional<double> cutoff_r;
};

double backward_kernel(const Vec6& y, double t, const KernelProbe& probe);
double cutoff_psi(double dist, double r);

/// Triangle quadrature of rho (times the window, when set) over one mesh;
/// one-point barycentric, upgraded to three points once the kernel width
/// drops below the mesh scale.
double gaussian_density(const SurfaceMesh& mesh, double t, const KernelProbe& probe);
std::vector<double> gaussian_density_series(const std::vector<Snapshot>& snapshots,
                                            const KernelProbe& probe);

struct MonotonicityReport {
  std::vector<double> series;
  double max_upward = 0.0;  // largest positive increment
};
MonotonicityReport huisken_monotonicity_check(const std::vector<Snapshot>& snapshots,
                                              const KernelProbe& probe);

struct SurfaceState {
  const SurfaceMesh* mesh = nullptr;
  const std::vector<ShapeData>* shapes = nullptr;
  double t = 0.0;
};

/// L^2 norm over vertices of d(eta)/dt - [laplace(eta) + eta * bracket +
/// (1 - eta^2) Ric(J e1, e2)] between two states on the same connectivity.
double eta_evolution_residual(const SurfaceState& before, const SurfaceState& after,
                              const MeshConnectivity& conn, const AmbientModel& ambient,
                              CalibForm form);

struct LocalizedSeries {
  std::vector<double> t;
  std::vector<double> value;      // integral of psi (1 - eta) rho
  std::vector<double> companion;  // integral of psi rho * curvature bracket
  /// Largest increment violation of d(value)/dt <= C, reported as
  /// max over steps of (value increment - C * dt).
  double max_violation(double C) const;
};
LocalizedSeries localized_monotone_quantity(const std::vector<Snapshot>& snapshots,
                                            const AmbientModel& ambient,
                                            const KernelProbe& probe, CalibForm form);

struct MinEtaReport {
  std::vector<double> series;
  double max_drop = 0.0;  // largest decrease between consecutive records
};
/// Requires an ambient with defined non-negative Einstein constant.
MinEtaReport min_eta_monotonicity(const std::vector<DiagnosticsRecord>& records,
                                  const AmbientModel& ambient, CalibForm form);

/// Violation of the integrated |A|^2 evolution inequality between two
/// states: positive values mean the discrete rate exceeded the bound.
double sff_evolution_residual(const SurfaceState& before, const SurfaceState& after,
                              const MeshConnectivity& conn, const AmbientModel& ambient);

/// Parabolic dilation of snapshots about (y0, t0): positions to
/// lambda (y - y0), times to lambda^2 (t - t0).
std::vector<Snapshot> parabolic_dilation(const std::vector<Snapshot>& snapshots, const Vec6& y0,
                                         double t0, double lambda);

}  // namespace mcf4
