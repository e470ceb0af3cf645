#include "mcf4/flow.hpp"

#include <cmath>

#include "doctest.h"

using namespace mcf4;

namespace {

double rms_radius(const SurfaceMesh& mesh) {
  Vec6 center = Vec6::Zero();
  for (const auto& p : mesh.positions) center += p;
  center /= mesh.vertex_count();
  double acc = 0.0;
  for (const auto& p : mesh.positions) acc += (p - center).squaredNorm();
  return std::sqrt(acc / mesh.vertex_count());
}

}  // namespace

TEST_CASE("stationary surfaces stay put: factor sphere and diagonal") {
  auto ambient = AmbientModel::product_spheres(1.0, 1.0);
  for (int which : {0, 1}) {
    SurfaceMesh mesh;
    if (which == 0) {
      mesh = sphere_factor1(2, ambient);
    } else {
      auto map = sample_graph_map(2, [](const Vec3& v) { return v; });
      mesh = graph_immersion(map);
    }
    auto conn = build_connectivity(mesh);
    FlowConfig config;
    config.t_end = 1e9;
    config.max_dt = 1e-3;
    config.integrator = FlowConfig::Integrator::Euler;
    FlowState state = make_state(mesh, conn, ambient);
    std::vector<Vec6> start = state.mesh.positions;
    for (int s = 0; s < 50; ++s) step(state, conn, ambient, config);
    double drift = 0.0;
    for (int v = 0; v < state.mesh.vertex_count(); ++v) {
      drift = std::max(drift, (state.mesh.positions[v] - start[v]).norm());
    }
    CHECK(drift < 1e-10);
  }
}

TEST_CASE("shrinking sphere follows r(t) = sqrt(r0^2 - 4t)") {
  auto flat = AmbientModel::euclidean4();
  double r0 = 1.0;
  SurfaceMesh mesh = sphere_in_euclidean4(3, r0);
  FlowConfig config;
  config.t_end = (r0 * r0 - 0.36) / 4.0;  // down to r = 0.6 r0
  config.kappa = 0.5;
  config.max_dt = 1.0;
  config.integrator = FlowConfig::Integrator::RK2;
  config.record_eta_residual = false;
  RunResult rr = run(mesh, flat, config);
  CHECK(rr.reason == StopReason::ReachedTEnd);
  double expect = std::sqrt(r0 * r0 - 4.0 * rr.state.t);
  CHECK(rms_radius(rr.state.mesh) == doctest::Approx(expect).epsilon(0.01));

  // area strictly decreasing up to the allowed slack
  for (size_t i = 1; i < rr.records.size(); ++i) {
    CHECK(rr.records[i].area <= rr.records[i - 1].area + 1e-6 * rr.records[i - 1].area);
  }
}

TEST_CASE("blow-up stop carries a type-I singular time estimate") {
  auto flat = AmbientModel::euclidean4();
  double r0 = 1.0;
  SurfaceMesh mesh = sphere_in_euclidean4(3, r0);
  FlowConfig config;
  config.t_end = 1.0;  // beyond the singular time r0^2/4
  config.kappa = 0.5;
  config.max_dt = 1.0;
  config.tol_blowup_A2 = 50.0;  // reached near r = 0.2 r0
  config.integrator = FlowConfig::Integrator::Euler;
  config.record_eta_residual = false;
  RunResult rr = run(mesh, flat, config);
  CHECK(rr.reason == StopReason::BlowUp);
  CHECK(rr.singular_time == doctest::Approx(r0 * r0 / 4.0).epsilon(0.03));
  CHECK(rr.type1_constant == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("t_end = 0 returns the initial state with no records") {
  auto flat = AmbientModel::euclidean4();
  SurfaceMesh mesh = sphere_in_euclidean4(1, 1.0);
  FlowConfig config;
  config.t_end = 0.0;
  RunResult rr = run(mesh, flat, config);
  CHECK(rr.reason == StopReason::ReachedTEnd);
  CHECK(rr.state.step_count == 0);
  CHECK(rr.records.empty());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK((rr.state.mesh.positions[v] - mesh.positions[v]).norm() == 0.0);
  }
}

TEST_CASE("local area element shrinks at rate -|H|^2") {
  auto flat = AmbientModel::euclidean4();
  SurfaceMesh mesh = sphere_in_euclidean4(4, 1.0);
  auto conn = build_connectivity(mesh);
  FlowConfig config;
  config.t_end = 1.0;
  config.kappa = 0.2;
  config.max_dt = 1e-4;
  config.integrator = FlowConfig::Integrator::RK2;
  FlowState state = make_state(mesh, conn, flat);
  auto H0 = vertex_areas(state.mesh);
  std::vector<double> h2(state.mesh.vertex_count());
  for (int v = 0; v < state.mesh.vertex_count(); ++v) h2[v] = state.shapes[v].H.squaredNorm();
  StepResult sr = step(state, conn, flat, config);
  auto areas1 = vertex_areas(state.mesh);
  for (int v = 0; v < state.mesh.vertex_count(); v += 17) {
    double rate = (std::log(areas1[v]) - std::log(H0[v])) / sr.dt;
    CHECK(rate == doctest::Approx(-h2[v]).epsilon(0.10));
  }
}

TEST_CASE("integrator order: euler is first order, rk2 second") {
  auto flat = AmbientModel::euclidean4();
  SurfaceMesh mesh = sphere_in_euclidean4(2, 1.0);
  auto conn = build_connectivity(mesh);
  auto final_positions = [&](FlowConfig::Integrator integ, double dt) {
    FlowConfig config;
    config.t_end = 0.02;
    config.max_dt = dt;
    config.kappa = 0.999;  // keep the CFL bound inactive at this resolution
    config.integrator = integ;
    config.record_eta_residual = false;
    RunResult rr = run(mesh, flat, config);
    return rr.state.mesh.positions;
  };
  for (auto [integ, min_slope] :
       {std::pair{FlowConfig::Integrator::Euler, 0.9},
        std::pair{FlowConfig::Integrator::RK2, 1.8}}) {
    auto x1 = final_positions(integ, 2e-3);
    auto x2 = final_positions(integ, 1e-3);
    auto x4 = final_positions(integ, 5e-4);
    double d1 = 0.0, d2 = 0.0;
    for (size_t v = 0; v < x1.size(); ++v) {
      d1 = std::max(d1, (x1[v] - x2[v]).norm());
      d2 = std::max(d2, (x2[v] - x4[v]).norm());
    }
    double slope = std::log2(d1 / d2);
    CHECK(slope >= min_slope);
  }
}

TEST_CASE("estimate_singular_time: synthetic and degenerate series") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 50; ++i) {
    double t = 0.9 * i / 50.0;
    series.emplace_back(t, 3.0 / (1.0 - t));
  }
  auto fit = estimate_singular_time(series);
  CHECK(fit.detected);
  CHECK(fit.t0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.c == doctest::Approx(3.0).epsilon(1e-6));

  std::vector<std::pair<double, double>> flat_series;
  for (int i = 0; i <= 50; ++i) flat_series.emplace_back(i * 0.1, 2.0);
  auto none = estimate_singular_time(flat_series);
  CHECK(!none.detected);
  CHECK(std::isinf(none.t0));
}

TEST_CASE("config validation") {
  FlowConfig config;
  config.kappa = 1.5;
  CHECK_THROWS_AS(config.validate(), ValidationError);
  config.kappa = 0.5;
  config.tol_blowup_A2 = -1.0;
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
