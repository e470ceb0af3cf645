#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "mcf4/surface.hpp"

// Explicit time integration of dF/dt = H with manifold reprojection, CFL-type
// step control and stopping logic.

namespace mcf4 {

/// Per-step scalars recorded along a run; one row per accepted step.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double area = 0.0;
  double min_eta1 = 0.0, max_eta1 = 0.0;
  double min_eta2 = 0.0, max_eta2 = 0.0;
  double min_mu = 0.0;  // mu = eta' + eta''
  double max_A2 = 0.0;
  double max_H = 0.0;
  double eta_residual = 0.0;  // evolution-equation residual for omega'
};

struct FlowConfig {
  double kappa = 0.5;  // CFL-like constant, in (0, 1)
  double max_dt = 1e-2;
  double t_end = 1.0;
  double tol_converge_H = 1e-3;   // converged when max|H| stays below this
  int converge_consecutive = 10;  // ... for this many consecutive steps
  double tol_blowup_A2 = 1e4;     // blow-up stop when max|A|^2 exceeds this
  enum class Integrator { Euler, RK2 } integrator = Integrator::RK2;
  int snapshot_every = 0;  // 0 disables snapshots
  double min_angle_floor = 0.05;  // radians; mesh-quality abort below this
  long max_steps = 2000000;
  bool record_eta_residual = true;
  ShapeOptions shape;

  void validate() const;
};

struct FlowState {
  double t = 0.0;
  SurfaceMesh mesh;
  std::vector<ShapeData> shapes;
  long step_count = 0;
};

enum class StopReason { ReachedTEnd, Converged, BlowUp, Stall, MaxSteps };
const char* to_string(StopReason reason);

FlowState make_state(SurfaceMesh mesh, const MeshConnectivity& conn, const AmbientModel& ambient,
                     const ShapeOptions& opts = {});

struct StepResult {
  double dt = 0.0;
  bool stalled = false;
};

/// One accepted explicit step with dt = min(max_dt, kappa/max|A|^2,
/// kappa h_min^2 / 2, t_end - t); vertices are reprojected onto M afterwards.
StepResult step(FlowState& state, const MeshConnectivity& conn, const AmbientModel& ambient,
                const FlowConfig& config);

struct RunResult {
  FlowState state;
  StopReason reason = StopReason::ReachedTEnd;
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  double singular_time = std::numeric_limits<double>::infinity();
  double type1_constant = std::numeric_limits<double>::quiet_NaN();
};

RunResult run(SurfaceMesh initial, const AmbientModel& ambient, const FlowConfig& config);

struct SingularTimeFit {
  double t0 = std::numeric_limits<double>::infinity();
  double c = std::numeric_limits<double>::quiet_NaN();
  bool detected = false;
};

/// Least-squares fit of 1/max|A|^2 ~ (t0 - t)/C over the trailing window of
/// the series; returns the +inf sentinel when no decay is present.
SingularTimeFit estimate_singular_time(const std::vector<std::pair<double, double>>& t_maxA2,
                                       double window_fraction = 0.3);

}  // namespace mcf4
