#include "mcf4/ambient.hpp"

#include <cmath>

namespace mcf4 {

namespace {

// Constant component matrices of the flat Kahler pair on R^4 with
// coordinates (x1, y1, x2, y2).
Mat4 flat_form(CalibForm form) {
  Mat4 m = Mat4::Zero();
  switch (form) {
    case CalibForm::Omega1:
      m(0, 1) = 1.0;
      break;
    case CalibForm::Omega2:
      m(2, 3) = 1.0;
      break;
    case CalibForm::OmegaPrime:
      m(0, 1) = 1.0;
      m(2, 3) = 1.0;
      break;
    case CalibForm::OmegaDoublePrime:
      m(0, 1) = 1.0;
      m(2, 3) = -1.0;
      break;
  }
  m -= m.transpose().eval();
  return m;
}

}  // namespace

AmbientModel AmbientModel::euclidean4() {
  return AmbientModel(AmbientKind::Euclidean4, 0.0, 0.0);
}

AmbientModel AmbientModel::product_spheres(double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) {
    throw ValidationError("product_spheres radii must be positive");
  }
  return AmbientModel(AmbientKind::ProductSpheres, r1, r2);
}

bool AmbientModel::is_einstein() const {
  if (kind_ == AmbientKind::Euclidean4) return true;
  return std::abs(r1_ - r2_) <= 1e-12 * std::max(r1_, r2_);
}

double AmbientModel::einstein_constant() const {
  if (kind_ == AmbientKind::Euclidean4) return 0.0;
  if (!is_einstein()) {
    throw ValidationError("einstein_constant: product of spheres with r1 != r2 is not Einstein");
  }
  return 1.0 / (r1_ * r1_);
}

bool AmbientModel::on_manifold(const AmbientPoint& p, double tol) const {
  if (kind_ == AmbientKind::Euclidean4) {
    return std::abs(p(4)) <= tol && std::abs(p(5)) <= tol;
  }
  return std::abs(factor1(p).norm() - r1_) <= tol && std::abs(factor2(p).norm() - r2_) <= tol;
}

void AmbientModel::require_point(const AmbientPoint& p) const {
  if (!on_manifold(p, 1e-8)) {
    throw ValidationError("point does not lie on the ambient manifold");
  }
}

AmbientPoint AmbientModel::project_to_manifold(const Vec6& p) const {
  if (kind_ == AmbientKind::Euclidean4) {
    Vec6 out = p;
    out(4) = 0.0;
    out(5) = 0.0;
    return out;
  }
  Vec3 a = factor1(p);
  Vec3 b = factor2(p);
  double na = a.norm(), nb = b.norm();
  if (na < 1e-14 * r1_ || nb < 1e-14 * r2_) {
    throw ValidationError("projection undefined: a factor of the point is zero");
  }
  return assemble(a * (r1_ / na), b * (r2_ / nb));
}

Vec6 AmbientModel::tangent_projection(const AmbientPoint& p, const Vec6& v) const {
  if (kind_ == AmbientKind::Euclidean4) {
    Vec6 out = v;
    out(4) = 0.0;
    out(5) = 0.0;
    return out;
  }
  require_point(p);
  Vec3 n1 = factor1(p).normalized();
  Vec3 n2 = factor2(p).normalized();
  Vec3 a = factor1(v) - factor1(v).dot(n1) * n1;
  Vec3 b = factor2(v) - factor2(v).dot(n2) * n2;
  return assemble(a, b);
}

bool AmbientModel::is_tangent(const AmbientPoint& p, const Vec6& v, double tol) const {
  Vec6 t = tangent_projection(p, v);
  return (v - t).norm() <= tol * std::max(1.0, v.norm());
}

double AmbientModel::curvature(const AmbientPoint& p, const Vec6& X, const Vec6& Y,
                               const Vec6& Z, const Vec6& W) const {
  if (kind_ == AmbientKind::Euclidean4) return 0.0;
  require_point(p);
  for (const Vec6* v : {&X, &Y, &Z, &W}) {
    if (!is_tangent(p, *v)) throw ValidationError("curvature: argument is not tangent");
  }
  auto block = [](double kappa, const Vec3& x, const Vec3& y, const Vec3& z, const Vec3& w) {
    return kappa * (x.dot(z) * y.dot(w) - y.dot(z) * x.dot(w));
  };
  double k1 = 1.0 / (r1_ * r1_);
  double k2 = 1.0 / (r2_ * r2_);
  return block(k1, factor1(X), factor1(Y), factor1(Z), factor1(W)) +
         block(k2, factor2(X), factor2(Y), factor2(Z), factor2(W));
}

double AmbientModel::ricci(const AmbientPoint& p, const Vec6& X, const Vec6& Y) const {
  if (kind_ == AmbientKind::Euclidean4) return 0.0;
  auto frame = tangent_basis(p);
  double sum = 0.0;
  for (const Vec6& e : frame) sum += curvature(p, X, e, Y, e);
  return sum;
}

std::array<Vec6, 4> AmbientModel::tangent_basis(const AmbientPoint& p) const {
  std::array<Vec6, 4> frame;
  if (kind_ == AmbientKind::Euclidean4) {
    for (int i = 0; i < 4; ++i) frame[i] = embed4(Vec4::Unit(i));
    return frame;
  }
  require_point(p);
  int found = 0;
  for (int pivot = 0; pivot < 6 && found < 4; ++pivot) {
    Vec6 c = tangent_projection(p, Vec6::Unit(pivot));
    for (int j = 0; j < found; ++j) c -= c.dot(frame[j]) * frame[j];
    double n = c.norm();
    if (n > 0.35) frame[found++] = c / n;
  }
  if (found < 4) throw ValidationError("tangent_basis: Gram-Schmidt ran out of pivots");

  // orient for (omega')^2 > 0: flip the last vector when the Pfaffian of the
  // omega' components is negative
  Mat4 comps = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      comps(i, j) = omega(p, CalibForm::OmegaPrime, frame[i], frame[j]);
      comps(j, i) = -comps(i, j);
    }
  if (forms::pfaffian(forms::TwoForm4(comps)) < 0.0) frame[3] = -frame[3];
  return frame;
}

double AmbientModel::omega(const AmbientPoint& p, CalibForm form, const Vec6& X,
                           const Vec6& Y) const {
  if (kind_ == AmbientKind::Euclidean4) {
    Mat4 m = flat_form(form);
    return X.head<4>().dot(m * Y.head<4>());
  }
  require_point(p);
  Vec3 n1 = factor1(p).normalized();
  Vec3 n2 = factor2(p).normalized();
  double w1 = n1.dot(factor1(X).cross(factor1(Y)));
  double w2 = n2.dot(factor2(X).cross(factor2(Y)));
  switch (form) {
    case CalibForm::Omega1:
      return w1;
    case CalibForm::Omega2:
      return w2;
    case CalibForm::OmegaPrime:
      return w1 + w2;
    case CalibForm::OmegaDoublePrime:
      return w1 - w2;
  }
  return 0.0;
}

Vec6 AmbientModel::apply_J(const AmbientPoint& p, CalibForm form, const Vec6& X) const {
  if (kind_ == AmbientKind::Euclidean4) {
    // J = M^T for component matrix M
    Mat4 m = flat_form(form);
    return embed4(m.transpose() * X.head<4>());
  }
  require_point(p);
  Vec3 n1 = factor1(p).normalized();
  Vec3 n2 = factor2(p).normalized();
  Vec3 j1 = n1.cross(factor1(X));
  Vec3 j2 = n2.cross(factor2(X));
  switch (form) {
    case CalibForm::Omega1:
      return assemble(j1, Vec3::Zero());
    case CalibForm::Omega2:
      return assemble(Vec3::Zero(), j2);
    case CalibForm::OmegaPrime:
      return assemble(j1, j2);
    case CalibForm::OmegaDoublePrime:
      return assemble(j1, -j2);
  }
  return Vec6::Zero();
}

std::pair<forms::TwoForm4, forms::TwoForm4> AmbientModel::parallel_forms(
    const AmbientPoint& p, const std::array<Vec6, 4>& frame) const {
  Mat4 a = Mat4::Zero(), b = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      a(i, j) = omega(p, CalibForm::OmegaPrime, frame[i], frame[j]);
      a(j, i) = -a(i, j);
      b(i, j) = omega(p, CalibForm::OmegaDoublePrime, frame[i], frame[j]);
      b(j, i) = -b(i, j);
    }
  return {forms::TwoForm4(a), forms::TwoForm4(b)};
}

Vec6 AmbientModel::embedding_correction(const AmbientPoint& p, const Vec6& e1,
                                        const Vec6& e2) const {
  if (kind_ == AmbientKind::Euclidean4) return Vec6::Zero();
  require_point(p);
  Vec3 n1 = factor1(p).normalized();
  Vec3 n2 = factor2(p).normalized();
  double m1 = factor1(e1).squaredNorm() + factor1(e2).squaredNorm();
  double m2 = factor2(e1).squaredNorm() + factor2(e2).squaredNorm();
  return assemble(-(m1 / r1_) * n1, -(m2 / r2_) * n2);
}

}  // namespace mcf4
