#include "mcf4/flow.hpp"

#include <cmath>
#include <string>

#include "mcf4/diagnostics.hpp"

namespace mcf4 {

void FlowConfig::validate() const {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ValidationError("kappa must lie in (0, 1)");
  if (!(max_dt > 0.0)) throw ValidationError("max_dt must be positive");
  if (t_end < 0.0) throw ValidationError("t_end must be non-negative");
  if (!(tol_converge_H > 0.0) || !(tol_blowup_A2 > 0.0)) {
    throw ValidationError("stop tolerances must be positive");
  }
  if (shape.fit_degree != 2 && shape.fit_degree != 3) {
    throw ValidationError("fit_degree must be 2 or 3");
  }
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ReachedTEnd:
      return "reached-t_end";
    case StopReason::Converged:
      return "converged";
    case StopReason::BlowUp:
      return "blow-up";
    case StopReason::Stall:
      return "stall";
    case StopReason::MaxSteps:
      return "max-steps";
  }
  return "unknown";
}

FlowState make_state(SurfaceMesh mesh, const MeshConnectivity& conn, const AmbientModel& ambient,
                     const ShapeOptions& opts) {
  FlowState state;
  state.mesh = std::move(mesh);
  state.shapes = shape_data_all(state.mesh, conn, ambient, opts);
  return state;
}

namespace {

double max_A2_of(const std::vector<ShapeData>& shapes) {
  double m = 0.0;
  for (const auto& s : shapes) m = std::max(m, s.A2);
  return m;
}

double max_H_of(const std::vector<ShapeData>& shapes) {
  double m = 0.0;
  for (const auto& s : shapes) m = std::max(m, s.H.norm());
  return m;
}

}  // namespace

StepResult step(FlowState& state, const MeshConnectivity& conn, const AmbientModel& ambient,
                const FlowConfig& config) {
  config.validate();
  double max_a2 = max_A2_of(state.shapes);
  double h_min = min_edge_length(state.mesh);
  double dt = config.max_dt;
  if (max_a2 > 0.0) dt = std::min(dt, config.kappa / max_a2);
  dt = std::min(dt, 0.5 * config.kappa * h_min * h_min);
  if (config.t_end > state.t) dt = std::min(dt, config.t_end - state.t);

  StepResult result;
  result.dt = dt;
  if (dt < 1e-15 * std::max(1.0, std::abs(state.t))) {
    result.stalled = true;
    return result;
  }

  if (min_triangle_angle(state.mesh) < config.min_angle_floor) {
    throw MeshQualityError("minimum triangle angle fell below the configured floor at t = " +
                           std::to_string(state.t));
  }

  const int nv = state.mesh.vertex_count();
  if (config.integrator == FlowConfig::Integrator::Euler) {
    for (int v = 0; v < nv; ++v) {
      state.mesh.positions[v] =
          ambient.project_to_manifold(state.mesh.positions[v] + dt * state.shapes[v].H);
    }
  } else {  // midpoint rule
    SurfaceMesh half = state.mesh;
    for (int v = 0; v < nv; ++v) {
      half.positions[v] =
          ambient.project_to_manifold(state.mesh.positions[v] + 0.5 * dt * state.shapes[v].H);
    }
    auto half_shapes = shape_data_all(half, conn, ambient, config.shape);
    for (int v = 0; v < nv; ++v) {
      state.mesh.positions[v] =
          ambient.project_to_manifold(state.mesh.positions[v] + dt * half_shapes[v].H);
    }
  }
  state.shapes = shape_data_all(state.mesh, conn, ambient, config.shape);
  state.t += dt;
  state.step_count += 1;
  return result;
}

RunResult run(SurfaceMesh initial, const AmbientModel& ambient, const FlowConfig& config) {
  config.validate();
  validate_mesh(initial, ambient);
  MeshConnectivity conn = build_connectivity(initial);

  RunResult out;
  out.state = make_state(std::move(initial), conn, ambient, config.shape);
  if (config.snapshot_every > 0) {
    out.snapshots.push_back({out.state.t, out.state.mesh});
  }

  int consecutive_converged = 0;
  std::vector<std::pair<double, double>> a2_series;

  while (true) {
    if (out.state.t >= config.t_end - 1e-15 * std::max(1.0, config.t_end)) {
      out.reason = StopReason::ReachedTEnd;
      break;
    }
    if (out.state.step_count >= config.max_steps) {
      out.reason = StopReason::MaxSteps;
      break;
    }
    double max_a2 = max_A2_of(out.state.shapes);
    if (max_a2 > config.tol_blowup_A2) {
      out.reason = StopReason::BlowUp;
      auto fit = estimate_singular_time(a2_series);
      out.singular_time = fit.t0;
      out.type1_constant = fit.c;
      break;
    }

    SurfaceMesh prev_mesh = out.state.mesh;
    std::vector<ShapeData> prev_shapes = out.state.shapes;
    double prev_t = out.state.t;

    StepResult sr = step(out.state, conn, ambient, config);
    if (sr.stalled) {
      out.reason = StopReason::Stall;
      break;
    }

    DiagnosticsRecord rec;
    rec.t = out.state.t;
    rec.dt = sr.dt;
    rec.area = area(out.state.mesh);
    rec.min_eta1 = std::numeric_limits<double>::infinity();
    rec.max_eta1 = -rec.min_eta1;
    rec.min_eta2 = rec.min_eta1;
    rec.max_eta2 = rec.max_eta1;
    rec.min_mu = rec.min_eta1;
    for (const auto& s : out.state.shapes) {
      rec.min_eta1 = std::min(rec.min_eta1, s.eta1);
      rec.max_eta1 = std::max(rec.max_eta1, s.eta1);
      rec.min_eta2 = std::min(rec.min_eta2, s.eta2);
      rec.max_eta2 = std::max(rec.max_eta2, s.eta2);
      rec.min_mu = std::min(rec.min_mu, s.eta1 + s.eta2);
    }
    rec.max_A2 = max_A2_of(out.state.shapes);
    rec.max_H = max_H_of(out.state.shapes);
    if (config.record_eta_residual) {
      SurfaceState before{&prev_mesh, &prev_shapes, prev_t};
      SurfaceState after{&out.state.mesh, &out.state.shapes, out.state.t};
      rec.eta_residual =
          eta_evolution_residual(before, after, conn, ambient, CalibForm::OmegaPrime);
    }
    out.records.push_back(rec);
    a2_series.emplace_back(rec.t, rec.max_A2);

    if (config.snapshot_every > 0 && out.state.step_count % config.snapshot_every == 0) {
      out.snapshots.push_back({out.state.t, out.state.mesh});
    }

    if (rec.max_H < config.tol_converge_H) {
      if (++consecutive_converged >= config.converge_consecutive) {
        out.reason = StopReason::Converged;
        break;
      }
    } else {
      consecutive_converged = 0;
    }
  }

  if (config.snapshot_every > 0 &&
      (out.snapshots.empty() || out.snapshots.back().t < out.state.t)) {
    out.snapshots.push_back({out.state.t, out.state.mesh});
  }
  if (out.reason != StopReason::BlowUp) {
    auto fit = estimate_singular_time(a2_series);
    if (fit.detected) {
      out.singular_time = fit.t0;
      out.type1_constant = fit.c;
    }
  }
  return out;
}

SingularTimeFit estimate_singular_time(const std::vector<std::pair<double, double>>& t_maxA2,
                                       double window_fraction) {
  SingularTimeFit fit;
  const int n = static_cast<int>(t_maxA2.size());
  int start = std::max(0, n - std::max(5, static_cast<int>(window_fraction * n)));
  int m = n - start;
  if (m < 3) return fit;

  // linear regression of y = 1/max|A|^2 against t: y = t0/C - t/C
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (int i = start; i < n; ++i) {
    double t = t_maxA2[i].first;
    double a2 = t_maxA2[i].second;
    if (!(a2 > 0.0)) return fit;
    double y = 1.0 / a2;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  double denom = m * stt - st * st;
  if (std::abs(denom) < 1e-300) return fit;
  double slope = (m * sty - st * sy) / denom;
  double intercept = (sy * stt - st * sty) / denom;
  if (slope >= -1e-300) return fit;  // no decay toward a singular time
  fit.c = -1.0 / slope;
  fit.t0 = intercept * fit.c;
  fit.detected = true;
  return fit;
}

}  // namespace mcf4
