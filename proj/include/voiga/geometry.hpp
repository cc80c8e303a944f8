#pragma once

#include <cmath>
#include <random>

#include "voiga/core.hpp"
#include "voiga/nurbs.hpp"

namespace voiga {

/// Exact NURBS constructions for the benchmark bodies. Spheres and arcs are
/// rational quadratic; straight directions are linear. Each builder that
/// claims a curved shape runs a sampled self-check.

/// Axis-aligned box, trilinear, one element.
inline NurbsVolume make_box(const Vec3& origin, const Vec3& lengths) {
  NurbsVolume v;
  v.kv = {KnotVector({0, 0, 1, 1}, 1), KnotVector({0, 0, 1, 1}, 1),
          KnotVector({0, 0, 1, 1}, 1)};
  v.n1 = v.n2 = v.n3 = 2;
  v.ctrl.resize(8);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        v.at(i, j, k) = to_homogeneous(
            origin + Vec3(i * lengths.x(), j * lengths.y(), k * lengths.z()), 1.0);
  v.validate();
  return v;
}

namespace detail {

struct ArcCP {
  double a, b, w;  // control point (a, b) with weight w
};

/// 90 degree arc from direction (a0,b0) to (a1,b1) (both unit, orthogonal).
/// Middle control point is the tangent intersection with weight cos(45).
inline std::array<ArcCP, 3> quarter_arc(double a0, double b0, double a1, double b1) {
  const double s = std::sqrt(0.5);
  return {ArcCP{a0, b0, 1.0}, ArcCP{a0 + a1, b0 + b1, s}, ArcCP{a1, b1, 1.0}};
}

inline void self_check_radius(const NurbsVolume& v, const Vec3& center, double radius,
                              Face face, const char* what) {
  const auto fs = extract_face_surface(v, face);
  std::mt19937 rng(99);
  for (int t = 0; t < 50; ++t) {
    Vec2 xi;
    for (int d = 0; d < 2; ++d) {
      std::uniform_real_distribution<double> dist(fs.s.kv[static_cast<size_t>(d)].front(),
                                                  fs.s.kv[static_cast<size_t>(d)].back());
      xi(d) = dist(rng);
    }
    const Vec3 x = eval_surface(fs.s, xi, 1).x;
    if (std::abs((x - center).norm() - radius) > 1e-10 * std::max(1.0, radius))
      throw ConstructionError(std::string(what) + ": surface radius self-check failed");
  }
}

}  // namespace detail

/// One eighth of a spherical shell, centered at the origin, occupying
/// {x >= 0, y >= 0, z <= 0}. Surface-of-revolution patch about the x axis:
///   xi1 = azimuth, from the meridian through A=(0,0,-r) to the equator
///         plane z=0; xi1=0 face lies in y=0, xi1=1 face lies in z=0 (top).
///   xi2 = meridian from the equator arc (xi2=0, in x=0) to the pole
///         B=(r,0,0); the xi2=1 edge is collapsed (degenerate).
///   xi3 = radial, inner (xi3=0) to outer (xi3=1); contact face = Xi3Max.
/// The contact point A sits at the parametric corner (0,0).
inline NurbsVolume make_sphere_octant_shell(double r_inner, double r_outer) {
  if (!(0.0 < r_inner && r_inner < r_outer))
    throw ConstructionError("octant shell radii must satisfy 0 < r_i < r_o");
  // azimuth arc in (y,z): from (0,-1) to (1,0)
  const auto az = detail::quarter_arc(0.0, -1.0, 1.0, 0.0);
  // meridian in (x, axial radius): from (0,1) [equator] to (1,0) [pole]
  const auto mer = detail::quarter_arc(0.0, 1.0, 1.0, 0.0);

  NurbsVolume v;
  v.kv = {KnotVector({0, 0, 0, 1, 1, 1}, 2), KnotVector({0, 0, 0, 1, 1, 1}, 2),
          KnotVector({0, 0, 1, 1}, 1)};
  v.n1 = v.n2 = 3;
  v.n3 = 2;
  v.ctrl.resize(18);
  const double radii[2] = {r_inner, r_outer};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        const double x = mer[static_cast<size_t>(j)].a;
        const double r = mer[static_cast<size_t>(j)].b;
        const double w = mer[static_cast<size_t>(j)].w * az[static_cast<size_t>(i)].w;
        const Vec3 p(x, r * az[static_cast<size_t>(i)].a, r * az[static_cast<size_t>(i)].b);
        v.at(i, j, k) = Vec4(w * radii[k] * p.x(), w * radii[k] * p.y(),
                             w * radii[k] * p.z(), w);
      }
  v.validate();
  detail::self_check_radius(v, Vec3::Zero(), r_outer, Face::Xi3Max, "sphere octant");
  detail::self_check_radius(v, Vec3::Zero(), r_inner, Face::Xi3Min, "sphere octant");
  return v;
}

/// Hollow hemispherical dome (z <= 0 half of a spherical shell), centered at
/// the origin. Single patch with two collapsed polar edges at (+-r, 0, 0):
///   xi1 = azimuth about the x axis, 180 degrees rim-to-rim (two arcs, C0 at
///         the bottom meridian); xi1 = {0,2} faces are the two half rings of
///         the flat annular top surface (z = 0).
///   xi2 = meridian pole-to-pole (two arcs, C0 at the bottom);
///         xi2 = {0,2} faces are the degenerate polar lines.
///   xi3 = radial, inner to outer; contact face = Xi3Max.
inline NurbsVolume make_dome_shell(double r_inner, double r_outer) {
  if (!(0.0 < r_inner && r_inner < r_outer))
    throw ConstructionError("dome shell radii must satisfy 0 < r_i < r_o");
  const double s = std::sqrt(0.5);
  // azimuth: (y,z) from (-1,0) over (0,-1) to (1,0)
  const detail::ArcCP az[5] = {{-1, 0, 1}, {-1, -1, s}, {0, -1, 1}, {1, -1, s}, {1, 0, 1}};
  // meridian: (x, axial radius) from (1,0) over (0,1) to (-1,0)
  const detail::ArcCP mer[5] = {{1, 0, 1}, {1, 1, s}, {0, 1, 1}, {-1, 1, s}, {-1, 0, 1}};

  NurbsVolume v;
  const KnotVector half_circle({0, 0, 0, 1, 1, 2, 2, 2}, 2);
  v.kv = {half_circle, half_circle, KnotVector({0, 0, 1, 1}, 1)};
  v.n1 = v.n2 = 5;
  v.n3 = 2;
  v.ctrl.resize(50);
  const double radii[2] = {r_inner, r_outer};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) {
        const double x = mer[j].a;
        const double r = mer[j].b;
        const double w = mer[j].w * az[i].w;
        const Vec3 p(x, r * az[i].a, r * az[i].b);
        v.at(i, j, k) = Vec4(w * radii[k] * p.x(), w * radii[k] * p.y(),
                             w * radii[k] * p.z(), w);
      }
  v.validate();
  detail::self_check_radius(v, Vec3::Zero(), r_outer, Face::Xi3Max, "dome shell");
  return v;
}

/// Block indentor with an exactly spherical bottom face: footprint fp x fp,
/// height h, spherical face with half-angle alpha (sphere radius
/// R = fp/2 / sin(alpha), center on the axis at z = R). Lowest point at the
/// origin, top face the flat square [-fp/2, fp/2]^2 x {h}. Contact face =
/// Xi3Min (the spherical face).
inline NurbsVolume make_indentor_block(double footprint, double height,
                                       double half_angle = kPi / 4.0) {
  const double sa = std::sin(half_angle), ca = std::cos(half_angle);
  const double R = 0.5 * footprint / sa;
  // homogeneous (sin, cos) coefficients of the arc from -alpha to +alpha
  const detail::ArcCP arc[3] = {{-sa, ca, 1.0}, {0.0, 1.0, ca}, {sa, ca, 1.0}};
  const Vec3 center(0, 0, R);

  NurbsVolume v;
  v.kv = {KnotVector({0, 0, 0, 1, 1, 1}, 2), KnotVector({0, 0, 0, 1, 1, 1}, 2),
          KnotVector({0, 0, 1, 1}, 1)};
  v.n1 = v.n2 = 3;
  v.n3 = 2;
  v.ctrl.resize(18);
  // bottom slab: direction d(u,v) = (sin u, cos u sin v, -cos u cos v)
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      const double w = arc[i].w * arc[j].w;
      const double xh = arc[i].a * arc[j].w;            // sin(u) * w_v
      const double yh = arc[i].b * arc[j].a;            // cos(u) sin(v)
      const double zh = -arc[i].b * arc[j].b;           // -cos(u) cos(v)
      v.at(i, j, 0) = Vec4(w * center.x() + R * xh, w * center.y() + R * yh,
                           w * center.z() + R * zh, w);
    }
  // top slab: flat square (quadratic with uniform grid reproduces the plane)
  const double g[3] = {-0.5 * footprint, 0.0, 0.5 * footprint};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      v.at(i, j, 1) = to_homogeneous(Vec3(g[i], g[j], height), 1.0);
  v.validate();
  detail::self_check_radius(v, center, R, Face::Xi3Min, "indentor spherical face");
  return v;
}

// ---------------------------------------------------------------------------
// Meshing helpers

/// Interior knots for n_el uniform elements on [a,b].
inline std::vector<double> uniform_interior_knots(double a, double b, int n_el) {
  std::vector<double> out;
  for (int i = 1; i < n_el; ++i) out.push_back(a + (b - a) * i / n_el);
  return out;
}

/// Interior knots grading elem_frac of the n_el elements uniformly into the
/// first len_frac of [a,b] (at_start) or the last (otherwise); the remaining
/// elements are uniform over the rest.
inline std::vector<double> graded_interior_knots(double a, double b, int n_el,
                                                 double elem_frac = 0.75,
                                                 double len_frac = 0.10,
                                                 bool at_start = true) {
  const int n_fine = std::max(1, static_cast<int>(std::lround(elem_frac * n_el)));
  const int n_coarse = n_el - n_fine;
  if (n_coarse < 1) return uniform_interior_knots(a, b, n_el);
  std::vector<double> out;
  const double L = b - a;
  if (at_start) {
    const double split = a + len_frac * L;
    for (int i = 1; i < n_fine; ++i) out.push_back(a + (split - a) * i / n_fine);
    out.push_back(split);
    for (int i = 1; i < n_coarse; ++i) out.push_back(split + (b - split) * i / n_coarse);
  } else {
    const double split = b - len_frac * L;
    for (int i = 1; i < n_coarse; ++i) out.push_back(a + (split - a) * i / n_coarse);
    out.push_back(split);
    for (int i = 1; i < n_fine; ++i) out.push_back(split + (b - split) * i / n_fine);
  }
  return out;
}

/// Splits every non-empty span of a knot vector into `per_span` equal parts.
inline std::vector<double> per_span_subdivision(const KnotVector& kv, int per_span) {
  std::vector<double> out;
  for (int s : kv.span_indices()) {
    const double a = kv[s], b = kv[s + 1];
    for (int i = 1; i < per_span; ++i) out.push_back(a + (b - a) * i / per_span);
  }
  return out;
}

}  // namespace voiga
