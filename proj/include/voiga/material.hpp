#pragma once

#include <cmath>

#include "voiga/core.hpp"

namespace voiga {

struct MaterialParams {
  double E = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

inline MaterialParams lame_from_engineering(double E, double nu) {
  if (!(E > 0.0)) throw DomainError("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5))
    throw DomainError("Poisson ratio must lie in (-1, 0.5); nu=0.5 is incompressible");
  MaterialParams m;
  m.E = E;
  m.nu = nu;
  m.mu = E / (2.0 * (1.0 + nu));
  m.lambda = 2.0 * m.mu * nu / (1.0 - 2.0 * nu);
  return m;
}

struct DeformationState {
  Mat3 F;
  double J = 1.0;
  Mat3 b;  // F F^T
};

/// Builds the deformation state; the caller supplies the element id so the
/// inversion signal can drive a load-step cutback.
inline DeformationState make_deformation_state(const Mat3& F, int element_id = -1) {
  DeformationState s;
  s.F = F;
  s.J = F.determinant();
  if (!(s.J > 0.0)) throw ElementInversion(element_id);
  s.b = F * F.transpose();
  return s;
}

/// Compressible Neo-Hookean strain energy density
/// W = lambda/2 (ln J)^2 + mu/2 (tr(F F^T) - 3) - mu ln J.
inline double strain_energy_density(const Mat3& F, const MaterialParams& m) {
  const double J = F.determinant();
  const double lnJ = std::log(J);
  return 0.5 * m.lambda * lnJ * lnJ + 0.5 * m.mu * ((F * F.transpose()).trace() - 3.0) -
         m.mu * lnJ;
}

/// Cauchy stress sigma = [lambda ln J I + mu (b - I)] / J.
inline Mat3 cauchy_stress(const DeformationState& s, const MaterialParams& m) {
  const double lnJ = std::log(s.J);
  return (m.lambda * lnJ * Mat3::Identity() + m.mu * (s.b - Mat3::Identity())) / s.J;
}

/// Spatial elasticity tensor in Voigt order (11,22,33,12,23,13) with
/// engineering shear strains: c = a' I(x)I + 2 b' I_sym, where
/// a' = lambda/J and b' = (mu - lambda ln J)/J.
inline Eigen::Matrix<double, 6, 6> spatial_tangent(const DeformationState& s,
                                                   const MaterialParams& m) {
  const double ap = m.lambda / s.J;
  const double bp = (m.mu - m.lambda * std::log(s.J)) / s.J;
  Eigen::Matrix<double, 6, 6> c = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = ap;
  for (int i = 0; i < 3; ++i) c(i, i) += 2.0 * bp;
  for (int i = 3; i < 6; ++i) c(i, i) = bp;
  return c;
}

/// Component access c_ijkl of the spatial tangent (tests use this for the
/// symmetry checks).
inline double spatial_tangent_component(const DeformationState& s, const MaterialParams& m,
                                        int i, int j, int k, int l) {
  const double ap = m.lambda / s.J;
  const double bp = (m.mu - m.lambda * std::log(s.J)) / s.J;
  const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return ap * d(i, j) * d(k, l) + bp * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
}

}  // namespace voiga
