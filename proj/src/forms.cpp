#include "mcf4/forms.hpp"

#include <cmath>
#include <numbers>

namespace mcf4::forms {

namespace {

void require_orthonormal(const Mat4& cols, double tol) {
  Mat4 gram = cols.transpose() * cols;
  double err = (gram - Mat4::Identity()).cwiseAbs().maxCoeff();
  if (err > tol) {
    throw ValidationError("frame is not orthonormal (max Gram deviation " +
                          std::to_string(err) + ")");
  }
}

}  // namespace

Frame4::Frame4(const Mat4& columns, int orientation_sign)
    : cols_(columns), sign_(orientation_sign >= 0 ? 1 : -1) {
  require_orthonormal(cols_, kFrameOrthoTol * 10);
  double det = cols_.determinant();
  if (det * sign_ < 0.5) {
    throw ValidationError("frame orientation sign inconsistent with determinant");
  }
}

Frame4 Frame4::standard() { return Frame4(Mat4::Identity(), +1); }

TwoForm4::TwoForm4(const Mat4& components) : m_(components) {
  double asym = (m_ + m_.transpose()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if (asym > kAntisymTol * scale) {
    throw ValidationError("two-form component matrix is not antisymmetric");
  }
  m_ = 0.5 * (m_ - m_.transpose().eval());
}

TwoForm4 TwoForm4::wedge(const Vec4& a, const Vec4& b) {
  return TwoForm4(a * b.transpose() - b * a.transpose());
}

TwoForm4 hodge_star(const TwoForm4& form, const Frame4& frame) {
  const Mat4& e = frame.matrix();
  Mat4 c = e.transpose() * form.components() * e;  // components in the frame
  Mat4 d = Mat4::Zero();
  d(0, 1) = c(2, 3);
  d(0, 2) = -c(1, 3);
  d(0, 3) = c(1, 2);
  d(1, 2) = c(0, 3);
  d(1, 3) = -c(0, 2);
  d(2, 3) = c(0, 1);
  d -= d.transpose().eval();
  d *= static_cast<double>(frame.orientation());
  return TwoForm4(e * d * e.transpose());
}

SDASDBasis sd_asd_basis(const Frame4& frame) {
  if (frame.orientation() < 0) {
    throw ValidationError("sd_asd_basis requires a positively oriented frame");
  }
  const double s = 1.0 / std::numbers::sqrt2;
  auto w = [&](int i, int j) { return TwoForm4::wedge(frame.e(i), frame.e(j)); };
  SDASDBasis b;
  b.alpha[0] = (w(0, 1) + w(2, 3)) * s;
  b.alpha[1] = (w(0, 2) - w(1, 3)) * s;
  b.alpha[2] = (w(0, 3) + w(1, 2)) * s;
  b.beta[0] = (w(0, 1) - w(2, 3)) * s;
  b.beta[1] = (w(0, 2) + w(1, 3)) * s;
  b.beta[2] = (w(0, 3) - w(1, 2)) * s;
  return b;
}

double pfaffian(const TwoForm4& form) {
  const Mat4& a = form.components();
  return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
}

EigenPair eigen_pair(const TwoForm4& form) {
  double n2 = form.norm2();
  double pf = pfaffian(form);
  double disc = n2 * n2 - 4.0 * pf * pf;
  disc = std::max(disc, 0.0);
  double x1 =0.5 * (n2 + std::sqrt(disc));
  // x1*x2 = pf^2; divide instead of subtracting to avoid cancellation.
  double x2 = x1 > 0.0 ? (pf * pf) / x1 : 0.0;
  double l1 = std::sqrt(std::max(x1, 0.0));
  double l2 = std::sqrt(std::max(x2, 0.0));
  if (pf < 0.0) l2 = -l2;
  return {l1, l2};
}

double comass(const TwoForm4& form) { return eigen_pair(form).lambda1; }

bool is_self_dual(const TwoForm4& form, double tol) {
  TwoForm4 s = hodge_star(form, Frame4::standard());
  return (s.components() - form.components()).cwiseAbs().maxCoeff() <= tol;
}

bool is_anti_self_dual(const TwoForm4& form, double tol) {
  TwoForm4 s = hodge_star(form, Frame4::standard());
  return (s.components() + form.components()).cwiseAbs().maxCoeff() <= tol;
}

Mat4 alpha_display(double eta1, double zeta1) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = eta1;
  m(0, 2) = zeta1;
  m(1, 3) = -zeta1;
  m(2, 3) = eta1;
  m -= m.transpose().eval();
  return m;
}

Mat4 beta_display(double eta2, double zeta2) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = eta2;
  m(0, 2) = zeta2;
  m(1, 3) = zeta2;
  m(2, 3) = -eta2;
  m -= m.transpose().eval();
  return m;
}

namespace {

// Unit vector completing e1, e2, e3 to a positively oriented orthonormal
// basis: the Hodge dual of e1 ^ e2 ^ e3.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 out;
  Eigen::Matrix3d m;
  for (int l = 0; l < 4; ++l) {
    int cols[3];
    int n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != l) cols[n++] = k;
    m << a(cols[0]), a(cols[1]), a(cols[2]), b(cols[0]), b(cols[1]), b(cols[2]),
        c(cols[0]), c(cols[1]), c(cols[2]);
    // sign so that det[e1 e2 e3 out] > 0
    double sign = (l % 2 == 0) ? -1.0 : 1.0;
    out(l) = sign * m.determinant();
  }
  return out;
}

void require_calibrating(const TwoForm4& f, bool want_self_dual, const char* name) {
  if (std::abs(comass(f) - 1.0) > kCalibratingTol) {
    throw ValidationError(std::string(name) + " must have comass 1");
  }
  bool ok = want_self_dual ? is_self_dual(f) : is_anti_self_dual(f);
  if (!ok) {
    throw ValidationError(std::string(name) + (want_self_dual
                                                   ? " must be self-dual"
                                                   : " must be anti-self-dual"));
  }
}

}  // namespace

AdaptedBasisResult adapted_basis(const OrientedPlane2& plane, const TwoForm4& alpha,
                                 const TwoForm4& beta) {
  require_calibrating(alpha, /*want_self_dual=*/true, "alpha");
  require_calibrating(beta, /*want_self_dual=*/false, "beta");

  Vec4 e1 = plane.u;
  Vec4 e2 = plane.sign >= 0 ? plane.v : Vec4(-plane.v);
  if (std::abs(e1.norm() - 1.0) > 1e-10 || std::abs(e2.norm() - 1.0) > 1e-10 ||
      std::abs(e1.dot(e2)) > 1e-10) {
    throw ValidationError("plane basis is not orthonormal");
  }

  Mat4 K = alpha.endomorphism();
  Mat4 L = beta.endomorphism();
  Mat4 M = K * L;  // commuting product, self-adjoint

  // In-plane rotation killing <KL e1, e2>; fold to the smallest angle.
  double m11 = (M * e1).dot(e1);
  double m22 = (M * e2).dot(e2);
  double m12 = (M * e1).dot(e2);
  double theta = 0.5 * std::atan2(-2.0 * m12, m22 - m11);
  const double qpi = std::numbers::pi / 4.0;
  if (theta > qpi) theta -= 2.0 * qpi;
  if (theta < -qpi) theta += 2.0 * qpi;
  Vec4 r1 = std::cos(theta) * e1 + std::sin(theta) * e2;
  Vec4 r2 = -std::sin(theta) * e1 + std::cos(theta) * e2;
  e1 = r1;
  e2 = r2;

  double eta1 = alpha(e1, e2);
  double eta2 = beta(e1, e2);

  Vec4 e3, e4;
  bool degenerate = std::abs(eta1) > 1.0 - kDegenerateEtaTol;
  if (!degenerate) {
    double z = std::sqrt(1.0 - eta1 * eta1);
    e3 = (K * e1 - eta1 * e2) / z;
    e4 = -(K * e2 + eta1 * e1) / z;
  } else if (std::abs(eta2) <= 1.0 - kDegenerateEtaTol) {
    double z = std::sqrt(1.0 - eta2 * eta2);
    e3 = (L * e1 - eta2 * e2) / z;
    e4 = cross4(e1, e2, e3);
  } else {
    // Both forms restrict to +-area form: any compatible completion works.
    e3.setZero();
    for (int pivot = 0; pivot < 4 && e3.norm() < 0.5; ++pivot) {
      Vec4 c = Vec4::Unit(pivot);
      c -= c.dot(e1) * e1 + c.dot(e2) * e2;
      e3 = c;
    }
    e3.normalize();
    e4 = cross4(e1, e2, e3);
  }

  // Gram-Schmidt polish to keep the frame inside the Frame4 tolerance.
  e3 -= e3.dot(e1) * e1 + e3.dot(e2) * e2;
  e3.normalize();
  e4 -= e4.dot(e1) * e1 + e4.dot(e2) * e2 + e4.dot(e3) * e3;
  e4.normalize();

  Mat4 cols;
  cols.col(0) = e1;
  cols.col(1) = e2;
  cols.col(2) = e3;
  cols.col(3) = e4;
  Frame4 frame(cols, +1);

  AdaptedBasisResult out{frame, eta1, alpha(e1, e3), eta2, beta(e1, e3), degenerate};
  return out;
}

}  // namespace mcf4::forms
