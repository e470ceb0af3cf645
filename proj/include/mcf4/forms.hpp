#pragma once

#include <array>

#include "mcf4/types.hpp"

// Exact linear algebra of 2-forms on an oriented 4-dimensional inner-product
// space: Hodge star, self-dual/anti-self-dual bases, eigen pairs, comass, and
// the adapted basis that puts a pair of calibrating forms into their normal
// form relative to an oriented 2-plane.

namespace mcf4::forms {

inline constexpr double kFrameOrthoTol = 1e-12;
inline constexpr double kAntisymTol = 1e-14;
inline constexpr double kCalibratingTol = 1e-9;
inline constexpr double kDegenerateEtaTol = 1e-8;

/// Orthonormal basis e1..e4 of R^4 together with an orientation sign;
/// positive sign means det[e1 e2 e3 e4] = +1.
class Frame4 {
 public:
  Frame4(const Mat4& columns, int orientation_sign);
  static Frame4 standard();

  Vec4 e(int i) const { return cols_.col(i); }  // i in 0..3
  const Mat4& matrix() const { return cols_; }
  int orientation() const { return sign_; }

 private:
  Mat4 cols_;
  int sign_;
};

/// Antisymmetric bilinear form given by its component matrix a_ij = w(ei, ej)
/// in the standard basis.
class TwoForm4 {
 public:
  TwoForm4() { m_.setZero(); }
  explicit TwoForm4(const Mat4& components);

  /// a* ^ b* as a two-form.
  static TwoForm4 wedge(const Vec4& a, const Vec4& b);

  double operator()(const Vec4& x, const Vec4& y) const { return x.dot(m_ * y); }
  const Mat4& components() const { return m_; }
  double comp(int i, int j) const { return m_(i, j); }

  /// Squared norm with <ei*^ej*, ek*^el*> = delta_ik delta_jl - delta_il delta_jk.
  double norm2() const { return 0.5 * m_.squaredNorm(); }

  /// K with w(X, Y) = <K(X), Y>.
  Mat4 endomorphism() const { return m_.transpose(); }

  TwoForm4 operator+(const TwoForm4& o) const { return TwoForm4(m_ + o.m_); }
  TwoForm4 operator-(const TwoForm4& o) const { return TwoForm4(m_ - o.m_); }
  TwoForm4 operator*(double c) const { return TwoForm4(c * m_); }
  TwoForm4 operator-() const { return TwoForm4(-m_); }

 private:
  Mat4 m_;
};

struct SDASDBasis {
  std::array<TwoForm4, 3> alpha;  // self-dual, orthonormal
  std::array<TwoForm4, 3> beta;   // anti-self-dual, orthonormal
};

/// Oriented 2-plane: span{u, v} with u, v orthonormal and the area form
/// satisfying mu(u, v) = sign.
struct OrientedPlane2 {
  Vec4 u;
  Vec4 v;
  double sign = 1.0;
};

/// |lambda1| >= |lambda2|, lambda1 >= 0, and sign(lambda1*lambda2) = sign(Pf).
struct EigenPair {
  double lambda1;
  double lambda2;
};

struct AdaptedBasisResult {
  Frame4 frame;
  double eta1;   // alpha(e1, e2)
  double zeta1;  // alpha(e1, e3), zeta1^2 + eta1^2 = 1
  double eta2;   // beta(e1, e2)
  double zeta2;  // beta(e1, e3), zeta2^2 + eta2^2 = 1
  bool degenerate;  // |eta1| = 1 branch taken
};

/// Hodge star with respect to the orientation carried by `frame`.
TwoForm4 hodge_star(const TwoForm4& form, const Frame4& frame);

/// The six-form orthonormal basis of self-dual / anti-self-dual 2-forms
/// attached to a positively oriented orthonormal frame.
SDASDBasis sd_asd_basis(const Frame4& frame);

double pfaffian(const TwoForm4& form);
EigenPair eigen_pair(const TwoForm4& form);
double comass(const TwoForm4& form);

bool is_self_dual(const TwoForm4& form, double tol = kCalibratingTol);
bool is_anti_self_dual(const TwoForm4& form, double tol = kCalibratingTol);

/// Normal form of a (self-dual, anti-self-dual) calibrating pair relative to
/// an oriented plane: returns the orthonormal frame with e1, e2 spanning the
/// plane in which alpha and beta take their displayed component matrices.
AdaptedBasisResult adapted_basis(const OrientedPlane2& plane, const TwoForm4& alpha,
                                 const TwoForm4& beta);

/// Component matrices the adapted basis is required to reproduce.
Mat4 alpha_display(double eta1, double zeta1);
Mat4 beta_display(double eta2, double zeta2);

}  // namespace mcf4::forms
