#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mcf4 {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
// Ambient vectors live in R^N with N = 4 or 6; stored fixed-size with the
// unused tail kept at zero so euclidean and product-sphere code paths share
// one type.
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad numerical input: non-orthonormal frame, point off the manifold, ...
struct ValidationError : Error {
  using Error::Error;
};

/// Config parsing failure; carries the offending field path in the message.
struct SchemaError : Error {
  using Error::Error;
};

/// Jet fit stencil too small or rank deficient at a named vertex.
struct StencilError : Error {
  using Error::Error;
};

/// Run aborted because the mesh degraded below the quality floor.
struct MeshQualityError : Error {
  using Error::Error;
};

}  // namespace mcf4
