#include "mcf4/ambient.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "mcf4/verify.hpp"

using namespace mcf4;

namespace {

Vec6 random_vec6(std::mt19937_64& rng, int dim = 6) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec6 v = Vec6::Zero();
  for (int i = 0; i < dim; ++i) v(i) = g(rng);
  return v;
}

AmbientPoint random_point(const AmbientModel& m, std::mt19937_64& rng) {
  if (m.kind() == AmbientKind::Euclidean4) {
    return random_vec6(rng, 4);
  }
  Vec6 p = random_vec6(rng);
  return m.project_to_manifold(p);
}

Vec6 random_tangent(const AmbientModel& m, const AmbientPoint& p, std::mt19937_64& rng) {
  return m.tangent_projection(p, random_vec6(rng, m.embedding_dim()));
}

}  // namespace

TEST_CASE("project_to_manifold: identity on R^4, radial normalization on spheres") {
  auto flat = AmbientModel::euclidean4();
  Vec6 p = embed4(Vec4(0.3, -2.0, 5.0, 0.1));
  CHECK((flat.project_to_manifold(p) - p).norm() == 0.0);

  auto ss = AmbientModel::product_spheres(1.0, 1.0);
  Vec6 q = Vec6::Zero();
  q << 2, 0, 0, 0, 3, 0;
  Vec6 expect = Vec6::Zero();
  expect << 1, 0, 0, 0, 1, 0;
  CHECK((ss.project_to_manifold(q) - expect).norm() < 1e-15);

  Vec6 zero_factor = Vec6::Zero();
  zero_factor << 1, 0, 0, 0, 0, 0;
  CHECK_THROWS_AS(ss.project_to_manifold(zero_factor), ValidationError);
}

TEST_CASE("projection is idempotent and distance-minimizing") {
  auto ss = AmbientModel::product_spheres(1.3, 0.7);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    Vec6 p = random_point(ss, rng);
    Vec6 noisy = p + 0.05 * random_vec6(rng);
    Vec6 proj = ss.project_to_manifold(noisy);
    CHECK(ss.on_manifold(proj));
    CHECK((ss.project_to_manifold(proj) - proj).norm() < 1e-12);
    double d = (noisy - proj).norm();
    for (int s = 0; s < 1000; ++s) {
      Vec6 other = random_point(ss, rng);
      CHECK(d <= (noisy - other).norm() + 1e-12);
    }
  }
}

TEST_CASE("tangent_projection: idempotent orthogonal decomposition") {
  auto flat = AmbientModel::euclidean4();
  Vec6 v = embed4(Vec4(1, 2, 3, 4));
  CHECK((flat.tangent_projection(Vec6::Zero(), v) - v).norm() == 0.0);

  auto ss = AmbientModel::product_spheres(1.0, 2.0);
  std::mt19937_64 rng(17);
  AmbientPoint p = random_point(ss, rng);
  Vec6 radial = assemble(factor1(p), Vec3::Zero());
  CHECK(ss.tangent_projection(p, radial).norm() < 1e-12);

  for (int k = 0; k < 30; ++k) {
    Vec6 w = random_vec6(rng);
    Vec6 t = ss.tangent_projection(p, w);
    Vec6 n = w - t;
    CHECK((ss.tangent_projection(p, t) - t).norm() < 1e-12);
    CHECK(std::abs(t.dot(n)) < 1e-12);
    CHECK((t + n - w).norm() < 1e-14);
  }
}

// Gauss curvature of the embedded factor metric by finite differences
// (Brioschi formula on a spherical chart), as an independent oracle.
namespace {
double fd_gauss_curvature_factor1(double r1, double r2) {
  auto chart = [&](double th, double ph) {
    Vec3 a(r1 * std::sin(th) * std::cos(ph), r1 * std::sin(th) * std::sin(ph),
           r1 * std::cos(th));
    Vec3 b(0, 0, r2);
    return assemble(a, b);
  };
  double th0 = 1.1, ph0 = 0.4, h = 1e-3;
  auto E = [&](double th, double ph) {
    Vec6 du = (chart(th + h, ph) - chart(th - h, ph)) / (2 * h);
    return du.dot(du);
  };
  auto G = [&](double th, double ph) {
    Vec6 dv = (chart(th, ph + h) - chart(th, ph - h)) / (2 * h);
    return dv.dot(dv);
  };
  // orthogonal chart (F = 0): K = -1/(2 sqrt(EG)) [ d/du (G_u / sqrt(EG)) + d/dv (E_v / sqrt(EG)) ]
  auto Gu = [&](double th, double ph) { return (G(th + h, ph) - G(th - h, ph)) / (2 * h); };
  auto Ev = [&](double th, double ph) { return (E(th, ph + h) - E(th, ph - h)) / (2 * h); };
  auto t1 = [&](double th, double ph) { return Gu(th, ph) / std::sqrt(E(th, ph) * G(th, ph)); };
  auto t2 = [&](double th, double ph) { return Ev(th, ph) / std::sqrt(E(th, ph) * G(th, ph)); };
  double d1 = (t1(th0 + h, ph0) - t1(th0 - h, ph0)) / (2 * h);
  double d2 = (t2(th0, ph0 + h) - t2(th0, ph0 - h)) / (2 * h);
  return -(d1 + d2) / (2.0 * std::sqrt(E(th0, ph0) * G(th0, ph0)));
}
}  // namespace

TEST_CASE("curvature: zero on R^4, factor Gauss curvature on spheres") {
  auto flat = AmbientModel::euclidean4();
  std::mt19937_64 rng(23);
  Vec6 p4 = embed4(Vec4(1, 0, 2, -1));
  CHECK(flat.curvature(p4, random_vec6(rng, 4), random_vec6(rng, 4), random_vec6(rng, 4),
                       random_vec6(rng, 4)) == 0.0);

  auto ss = AmbientModel::product_spheres(1.0, 1.0);
  Vec6 p = Vec6::Zero();
  p << 0, 0, 1, 1, 0, 0;
  Vec6 X = assemble(Vec3(1, 0, 0), Vec3::Zero());
  Vec6 Y = assemble(Vec3(0, 1, 0), Vec3::Zero());
  CHECK(ss.curvature(p, X, Y, X, Y) == doctest::Approx(1.0).epsilon(1e-12));

  // mixed-factor plane is flat
  Vec6 Z = assemble(Vec3::Zero(), Vec3(0, 1, 0));
  CHECK(ss.curvature(p, X, Z, X, Z) == doctest::Approx(0.0).epsilon(1e-14));

  // finite-difference oracle for unequal radii
  auto ss2 = AmbientModel::product_spheres(1.7, 0.9);
  double fd = fd_gauss_curvature_factor1(1.7, 0.9);
  Vec6 q = assemble(Vec3(0, 0, 1.7), Vec3(0, 0, 0.9));
  Vec6 Xq = assemble(Vec3(1, 0, 0), Vec3::Zero());
  Vec6 Yq = assemble(Vec3(0, 1, 0), Vec3::Zero());
  CHECK(ss2.curvature(q, Xq, Yq, Xq, Yq) == doctest::Approx(fd).epsilon(1e-5));

  CHECK_THROWS_AS(ss.curvature(p, assemble(factor1(p), Vec3::Zero()), Y, X, Y),
                  ValidationError);
}

TEST_CASE("curvature symmetries and first Bianchi identity") {
  auto ss = AmbientModel::product_spheres(1.2, 0.8);
  std::mt19937_64 rng(31);
  AmbientPoint p = random_point(ss, rng);
  for (int k = 0; k < 20; ++k) {
    Vec6 X = random_tangent(ss, p, rng), Y = random_tangent(ss, p, rng),
         Z = random_tangent(ss, p, rng), W = random_tangent(ss, p, rng);
    double kxyzw = ss.curvature(p, X, Y, Z, W);
    CHECK(kxyzw == doctest::Approx(-ss.curvature(p, Y, X, Z, W)).epsilon(1e-12));
    CHECK(kxyzw == doctest::Approx(ss.curvature(p, Z, W, X, Y)).epsilon(1e-12));
    double bianchi = ss.curvature(p, X, Y, Z, W) + ss.curvature(p, Y, Z, X, W) +
                     ss.curvature(p, Z, X, Y, W);
    CHECK(std::abs(bianchi) < 1e-12);
  }
}

TEST_CASE("ricci: trace of curvature, Einstein exactly when radii agree") {
  auto flat = AmbientModel::euclidean4();
  CHECK(flat.ricci(Vec6::Zero(), embed4(Vec4(1, 0, 0, 0)), embed4(Vec4(1, 0, 0, 0))) == 0.0);
  CHECK(flat.einstein_constant() == 0.0);

  auto unit = AmbientModel::product_spheres(1.0, 1.0);
  std::mt19937_64 rng(7);
  AmbientPoint p = random_point(unit, rng);
  for (int k = 0; k < 10; ++k) {
    Vec6 X = random_tangent(unit, p, rng);
    CHECK(std::abs(unit.ricci(p, X, X) - unit.einstein_constant() * X.squaredNorm()) < 1e-10);
  }
  Vec6 u1 = random_tangent(unit, p, rng).normalized();
  CHECK(unit.ricci(p, u1, u1) == doctest::Approx(1.0).epsilon(1e-12));

  auto uneven = AmbientModel::product_spheres(2.0, 0.5);
  CHECK(!uneven.is_einstein());
  CHECK_THROWS_AS(uneven.einstein_constant(), ValidationError);
  AmbientPoint q = random_point(uneven, rng);
  Vec6 t1 = uneven.tangent_projection(q, assemble(random_vec6(rng).head<3>(), Vec3::Zero()));
  t1.normalize();
  CHECK(uneven.ricci(q, t1, t1) == doctest::Approx(1.0 / 4.0).epsilon(1e-10));
  Vec6 t2 = uneven.tangent_projection(q, assemble(Vec3::Zero(), random_vec6(rng).tail<3>()));
  t2.normalize();
  CHECK(uneven.ricci(q, t2, t2) == doctest::Approx(1.0 / 0.25).epsilon(1e-10));
}

TEST_CASE("parallel forms: flat matrix, eigen pairs, comass one") {
  auto flat = AmbientModel::euclidean4();
  auto frame4 = flat.tangent_basis(Vec6::Zero());
  auto [wp, wpp] = flat.parallel_forms(Vec6::Zero(), frame4);
  Mat4 expect = Mat4::Zero();
  expect(0, 1) = 1;
  expect(2, 3) = 1;
  expect -= expect.transpose().eval();
  CHECK((wp.components() - expect).cwiseAbs().maxCoeff() < 1e-14);

  auto ss = AmbientModel::product_spheres(1.0, 1.0);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    AmbientPoint p = random_point(ss, rng);
    auto fr = ss.tangent_basis(p);
    auto [a, b] = ss.parallel_forms(p, fr);
    auto pa = forms::eigen_pair(a);
    auto pb = forms::eigen_pair(b);
    CHECK(pa.lambda1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pa.lambda2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pb.lambda1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pb.lambda2 == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(forms::comass(a) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(forms::comass(b) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(forms::is_self_dual(a, 1e-9));
    CHECK(forms::is_anti_self_dual(b, 1e-9));
  }
}

TEST_CASE("apply_J matches omega and squares to minus identity on tangents") {
  auto ss = AmbientModel::product_spheres(1.0, 1.0);
  std::mt19937_64 rng(43);
  AmbientPoint p = random_point(ss, rng);
  for (CalibForm form : {CalibForm::OmegaPrime, CalibForm::OmegaDoublePrime}) {
    for (int k = 0; k < 10; ++k) {
      Vec6 X = random_tangent(ss, p, rng), Y = random_tangent(ss, p, rng);
      CHECK(ss.omega(p, form, X, Y) == doctest::Approx(ss.apply_J(p, form, X).dot(Y)));
      Vec6 jjx = ss.apply_J(p, form, ss.apply_J(p, form, X));
      CHECK((jjx + X).norm() < 1e-12 * std::max(1.0, X.norm()));
    }
  }
}

TEST_CASE("parallelity: transported frame components change at second order") {
  auto ss = AmbientModel::product_spheres(1.0, 1.5);
  std::mt19937_64 rng(59);
  AmbientPoint p = random_point(ss, rng);
  // random frame mixing the two factors (a factor-aligned frame would see
  // the constant area-form pattern and hide transport errors entirely)
  auto base = ss.tangent_basis(p);
  Mat4 rot = verify::random_rotation4(9);
  std::array<Vec6, 4> frame;
  for (int i = 0; i < 4; ++i) {
    frame[i] = Vec6::Zero();
    for (int j = 0; j < 4; ++j) frame[i] += rot(j, i) * base[j];
  }
  Vec6 dir = random_tangent(ss, p, rng).normalized();

  auto transport = [&](double h) {
    AmbientPoint q = ss.project_to_manifold(p + h * dir);
    std::array<Vec6, 4> moved;
    for (int i = 0; i < 4; ++i) {
      Vec6 v = ss.tangent_projection(q, frame[i]);
      for (int j = 0; j < i; ++j) v -= v.dot(moved[j]) * moved[j];
      moved[i] = v.normalized();
    }
    return std::make_pair(q, moved);
  };

  auto parallel_change = [&](double h) {
    auto [q, moved] = transport(h);
    auto [a0, b0] = ss.parallel_forms(p, frame);
    auto [a1, b1] = ss.parallel_forms(q, moved);
    return std::max((a1.components() - a0.components()).cwiseAbs().maxCoeff(),
                    (b1.components() - b0.components()).cwiseAbs().maxCoeff());
  };

  // control: a position-weighted (non-parallel) form must drift at first order
  auto control_change = [&](double h) {
    auto [q, moved] = transport(h);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        double c0 = (1.0 + 0.5 * p(0)) * ss.omega(p, CalibForm::Omega1, frame[i], frame[j]);
        double c1 = (1.0 + 0.5 * q(0)) * ss.omega(q, CalibForm::Omega1, moved[i], moved[j]);
        worst = std::max(worst, std::abs(c1 - c0));
      }
    return worst;
  };

  double h1 = 0.02, h2 = 0.01;
  double slope = std::log(parallel_change(h1) / parallel_change(h2)) / std::log(h1 / h2);
  CHECK(slope >= 1.9);
  double control = std::log(control_change(h1) / control_change(h2)) / std::log(h1 / h2);
  CHECK(control < 1.5);
}

TEST_CASE("embedding correction: normal trace of the product embedding") {
  auto flat = AmbientModel::euclidean4();
  CHECK(flat.embedding_correction(Vec6::Zero(), embed4(Vec4::Unit(0)), embed4(Vec4::Unit(1)))
            .norm() == 0.0);

  auto ss = AmbientModel::product_spheres(1.0, 1.0);
  Vec6 p = Vec6::Zero();
  p << 0, 0, 1, 1, 0, 0;
  Vec6 e1 = assemble(Vec3(1, 0, 0), Vec3::Zero());
  Vec6 e2 = assemble(Vec3(0, 1, 0), Vec3::Zero());
  Vec6 E = ss.embedding_correction(p, e1, e2);
  Vec6 expect = assemble(Vec3(0, 0, -2), Vec3::Zero());
  CHECK((E - expect).norm() < 1e-14);

  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    AmbientPoint q = random_point(ss, rng);
    Vec6 a = random_tangent(ss, q, rng).normalized();
    Vec6 b = random_tangent(ss, q, rng);
    b -= b.dot(a) * a;
    b.normalize();
    Vec6 corr = ss.embedding_correction(q, a, b);
    CHECK(ss.tangent_projection(q, corr).norm() < 1e-12);
  }
}
