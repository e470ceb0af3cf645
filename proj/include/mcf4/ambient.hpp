#pragma once

#include <array>
#include <utility>

#include "mcf4/forms.hpp"
#include "mcf4/types.hpp"

// Concrete ambient 4-manifolds: flat R^4 (with coordinates x1, y1, x2, y2)
// and S^2(r1) x S^2(r2) embedded in R^3 x R^3 = R^6. Supplies the metric
// data, curvature, parallel calibrating forms and the embedding correction
// used by the flow and the diagnostics.

namespace mcf4 {

enum class AmbientKind { Euclidean4, ProductSpheres };

/// Selector for the parallel 2-forms carried by the model. OmegaPrime is the
/// self-dual Kahler form omega1 + omega2, OmegaDoublePrime the anti-self-dual
/// omega1 - omega2.
enum class CalibForm { Omega1, Omega2, OmegaPrime, OmegaDoublePrime };

/// Points are Vec6 with the unused tail zero; for product spheres the two
/// R^3 blocks must have norms r1 and r2 (to 1e-10).
using AmbientPoint = Vec6;

class AmbientModel {
 public:
  static AmbientModel euclidean4();
  static AmbientModel product_spheres(double r1, double r2);

  AmbientKind kind() const { return kind_; }
  int embedding_dim() const { return kind_ == AmbientKind::Euclidean4 ? 4 : 6; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }

  bool is_einstein() const;
  /// Ric = c g; defined for euclidean4 (c = 0) and equal radii (c = 1/r1^2).
  double einstein_constant() const;

  bool on_manifold(const AmbientPoint& p, double tol = 1e-10) const;
  void require_point(const AmbientPoint& p) const;

  /// Nearest point on M (factorwise radial normalization).
  AmbientPoint project_to_manifold(const Vec6& p) const;

  /// Orthogonal projection of v onto T_p M.
  Vec6 tangent_projection(const AmbientPoint& p, const Vec6& v) const;

  bool is_tangent(const AmbientPoint& p, const Vec6& v, double tol = 1e-8) const;

  /// K_{XYZW} with the sign convention <K(X,Y)X,Y> > 0 on positively curved M.
  double curvature(const AmbientPoint& p, const Vec6& X, const Vec6& Y, const Vec6& Z,
                   const Vec6& W) const;

  /// Ricci tensor as the trace of the curvature over a tangent frame.
  double ricci(const AmbientPoint& p, const Vec6& X, const Vec6& Y) const;

  /// Deterministic orthonormal tangent frame at p, positively oriented for
  /// the (omega')^2 orientation.
  std::array<Vec6, 4> tangent_basis(const AmbientPoint& p) const;

  /// Evaluate a parallel form on tangent vectors.
  double omega(const AmbientPoint& p, CalibForm form, const Vec6& X, const Vec6& Y) const;

  /// J with omega(X, Y) = <J X, Y>.
  Vec6 apply_J(const AmbientPoint& p, CalibForm form, const Vec6& X) const;

  /// Component matrices of (omega', omega'') in a supplied orthonormal
  /// tangent frame.
  std::pair<forms::TwoForm4, forms::TwoForm4> parallel_forms(
      const AmbientPoint& p, const std::array<Vec6, 4>& frame) const;

  /// E = sum_i Abar(e_i, e_i), the second-fundamental-form trace of M in R^N
  /// over a surface tangent frame {e1, e2}; identically zero for euclidean4.
  Vec6 embedding_correction(const AmbientPoint& p, const Vec6& e1, const Vec6& e2) const;

 private:
  AmbientModel(AmbientKind kind, double r1, double r2) : kind_(kind), r1_(r1), r2_(r2) {}

  AmbientKind kind_;
  double r1_;
  double r2_;
};

/// Factor blocks of a Vec6 (R^3 x R^3 layout for product spheres).
inline Vec3 factor1(const Vec6& v) { return v.head<3>(); }
inline Vec3 factor2(const Vec6& v) { return v.segment<3>(3); }
inline Vec6 assemble(const Vec3& a, const Vec3& b) {
  Vec6 out;
  out << a, b;
  return out;
}
inline Vec6 embed4(const Vec4& v) {
  Vec6 out = Vec6::Zero();
  out.head<4>() = v;
  return out;
}

}  // namespace mcf4
