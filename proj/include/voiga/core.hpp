#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace voiga {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Base class for all recoverable errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the admissible parametric/knot range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Invalid refinement request (e.g. knot multiplicity overflow).
class RefinementError : public Error {
public:
  using Error::Error;
};

/// Geometry construction failed (degenerate face, inconsistent grid, ...).
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// Surface kinematics undefined (degenerate tangents).
class KinematicsError : public Error {
public:
  using Error::Error;
};

/// Non-positive Jacobian detected at a quadrature point of a regular element.
class MeshQualityError : public Error {
public:
  MeshQualityError(int element, const std::string& msg)
      : Error(msg), element_id(element) {}
  int element_id;
};

/// det F <= 0 during a solve. Carries the offending element; the load
/// stepper reacts with a cutback.
class ElementInversion : public Error {
public:
  explicit ElementInversion(int element)
      : Error("element inversion in element " + std::to_string(element)),
        element_id(element) {}
  int element_id;
};

/// Raised by the Newton loop / linear solver when the step must be bisected.
class CutbackRequest : public Error {
public:
  using Error::Error;
};

/// Malformed or unknown configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace voiga
