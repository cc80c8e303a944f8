#pragma once

#include <array>
#include <functional>
#include <random>
#include <vector>

#include "voiga/bspline_basis.hpp"
#include "voiga/core.hpp"
#include "voiga/knot_vector.hpp"
#include "voiga/refine.hpp"

namespace voiga {

enum class Face { Xi1Min, Xi1Max, Xi2Min, Xi2Max, Xi3Min, Xi3Max };

inline int face_axis(Face f) { return static_cast<int>(f) / 2; }
inline bool face_is_max(Face f) { return static_cast<int>(f) % 2 == 1; }

/// Bi-variate NURBS patch. Control points are stored homogeneous
/// (w*x, w*y, w*z, w) in lexicographic order, first index fastest.
struct NurbsSurface {
  std::array<KnotVector, 2> kv;
  int n1 = 0, n2 = 0;
  std::vector<Vec4> ctrl;

  const Vec4& at(int i, int j) const { return ctrl[static_cast<size_t>(i + n1 * j)]; }
  Vec4& at(int i, int j) { return ctrl[static_cast<size_t>(i + n1 * j)]; }
  int degree(int d) const { return kv[static_cast<size_t>(d)].degree(); }

  void validate() const {
    if (kv[0].num_basis() != n1 || kv[1].num_basis() != n2 ||
        static_cast<int>(ctrl.size()) != n1 * n2)
      throw ConstructionError("surface grid inconsistent with knot vectors");
    for (const auto& h : ctrl)
      if (!(h.w() > 0.0)) throw ConstructionError("non-positive weight");
  }
};

/// Tri-variate NURBS solid, same storage conventions as NurbsSurface.
struct NurbsVolume {
  std::array<KnotVector, 3> kv;
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<Vec4> ctrl;

  int index(int i, int j, int k) const { return i + n1 * (j + n2 * k); }
  const Vec4& at(int i, int j, int k) const { return ctrl[static_cast<size_t>(index(i, j, k))]; }
  Vec4& at(int i, int j, int k) { return ctrl[static_cast<size_t>(index(i, j, k))]; }
  int degree(int d) const { return kv[static_cast<size_t>(d)].degree(); }
  int num_ctrl() const { return n1 * n2 * n3; }

  void validate() const {
    if (kv[0].num_basis() != n1 || kv[1].num_basis() != n2 || kv[2].num_basis() != n3 ||
        static_cast<int>(ctrl.size()) != n1 * n2 * n3)
      throw ConstructionError("volume grid inconsistent with knot vectors");
    for (const auto& h : ctrl)
      if (!(h.w() > 0.0)) throw ConstructionError("non-positive weight");
  }
};

// ---------------------------------------------------------------------------
// Evaluation

struct VolumeEval {
  Vec3 x;
  Mat3 jac;  // dx/dxi, columns are covariant directions
  double detJ = 0.0;
};

/// Tensor-product rational basis of one volume element: values and
/// parametric gradients of the (p1+1)(p2+1)(p3+1) functions with support at
/// xi, plus their flat control-point indices.
struct TrivariateBasis {
  std::vector<int> indices;
  VecX values;
  MatX grads;  // n x 3
};

inline TrivariateBasis trivariate_basis(const NurbsVolume& v, const Vec3& xi) {
  const BasisEval b1 = eval_basis(v.kv[0], xi(0), 1);
  const BasisEval b2 = eval_basis(v.kv[1], xi(1), 1);
  const BasisEval b3 = eval_basis(v.kv[2], xi(2), 1);
  const int p1 = v.degree(0), p2 = v.degree(1), p3 = v.degree(2);
  const int n = (p1 + 1) * (p2 + 1) * (p3 + 1);

  TrivariateBasis out;
  out.indices.resize(static_cast<size_t>(n));
  VecX num(n);
  MatX dnum(n, 3);
  double W = 0.0;
  Vec3 dW = Vec3::Zero();
  int a = 0;
  for (int k = 0; k <= p3; ++k)
    for (int j = 0; j <= p2; ++j)
      for (int i = 0; i <= p1; ++i, ++a) {
        const int gi = b1.first_index(p1) + i;
        const int gj = b2.first_index(p2) + j;
        const int gk = b3.first_index(p3) + k;
        out.indices[static_cast<size_t>(a)] = v.index(gi, gj, gk);
        const double w = v.at(gi, gj, gk).w();
        const double N1 = b1.values(i), N2 = b2.values(j), N3 = b3.values(k);
        const double d1 = b1.ders(1, i), d2 = b2.ders(1, j), d3 = b3.ders(1, k);
        num(a) = w * N1 * N2 * N3;
        dnum(a, 0) = w * d1 * N2 * N3;
        dnum(a, 1) = w * N1 * d2 * N3;
        dnum(a, 2) = w * N1 * N2 * d3;
        W += num(a);
        dW += dnum.row(a).transpose();
      }
  out.values = num / W;
  out.grads.resize(n, 3);
  for (int r = 0; r < n; ++r)
    out.grads.row(r) = (dnum.row(r) - out.values(r) * dW.transpose()) / W;
  return out;
}

inline VolumeEval eval_volume(const NurbsVolume& v, const Vec3& xi) {
  const auto basis = trivariate_basis(v, xi);
  VolumeEval out;
  out.x = Vec3::Zero();
  out.jac = Mat3::Zero();
  for (size_t a = 0; a < basis.indices.size(); ++a) {
    const Vec4& h = v.ctrl[static_cast<size_t>(basis.indices[a])];
    const Vec3 p = h.head<3>() / h.w();
    out.x += basis.values(static_cast<int>(a)) * p;
    out.jac += p * basis.grads.row(static_cast<int>(a));
  }
  out.detJ = out.jac.determinant();
  return out;
}

struct SurfaceEval {
  Vec3 x;
  Vec3 d1, d2;          // covariant tangents
  Vec3 d11, d12, d22;   // second derivatives
};

inline SurfaceEval eval_surface(const NurbsSurface& s, const Vec2& xi,
                                int der_order = 2) {
  const BasisEval b1 = eval_basis(s.kv[0], xi(0), der_order);
  const BasisEval b2 = eval_basis(s.kv[1], xi(1), der_order);
  const int p1 = s.degree(0), p2 = s.degree(1);

  // Homogeneous partials up to requested order.
  Vec4 H = Vec4::Zero(), H1 = Vec4::Zero(), H2 = Vec4::Zero();
  Vec4 H11 = Vec4::Zero(), H12 = Vec4::Zero(), H22 = Vec4::Zero();
  for (int j = 0; j <= p2; ++j)
    for (int i = 0; i <= p1; ++i) {
      const Vec4& c = s.at(b1.first_index(p1) + i, b2.first_index(p2) + j);
      H += b1.values(i) * b2.values(j) * c;
      H1 += b1.ders(1, i) * b2.values(j) * c;
      H2 += b1.values(i) * b2.ders(1, j) * c;
      if (der_order >= 2) {
        H11 += b1.ders(2, i) * b2.values(j) * c;
        H12 += b1.ders(1, i) * b2.ders(1, j) * c;
        H22 += b1.values(i) * b2.ders(2, j) * c;
      }
    }

  SurfaceEval e;
  const double w = H.w();
  e.x = H.head<3>() / w;
  e.d1 = (H1.head<3>() - e.x * H1.w()) / w;
  e.d2 = (H2.head<3>() - e.x * H2.w()) / w;
  if (der_order >= 2) {
    e.d11 = (H11.head<3>() - 2.0 * e.d1 * H1.w() - e.x * H11.w()) / w;
    e.d12 = (H12.head<3>() - e.d1 * H2.w() - e.d2 * H1.w() - e.x * H12.w()) / w;
    e.d22 = (H22.head<3>() - 2.0 * e.d2 * H2.w() - e.x * H22.w()) / w;
  } else {
    e.d11 = e.d12 = e.d22 = Vec3::Zero();
  }
  return e;
}

/// First and second fundamental quantities of a surface point.
struct SurfaceKinematics {
  Vec3 x;
  Vec3 tau1, tau2;
  Vec3 d11, d12, d22;
  Vec3 n;       // unit normal tau1 x tau2 / ||.||
  Mat2 metric;  // m_ab = tau_a . tau_b
  Mat2 curvature;  // k_ab = x_,ab . n
};

inline SurfaceKinematics surface_kinematics(const SurfaceEval& e) {
  SurfaceKinematics k;
  k.x = e.x;
  k.tau1 = e.d1;
  k.tau2 = e.d2;
  k.d11 = e.d11;
  k.d12 = e.d12;
  k.d22 = e.d22;
  const Vec3 c = e.d1.cross(e.d2);
  const double cn = c.norm();
  if (cn <= 1e-12 * std::max(1.0, e.d1.norm() * e.d2.norm()))
    throw KinematicsError("degenerate surface tangents");
  k.n = c / cn;
  k.metric << e.d1.dot(e.d1), e.d1.dot(e.d2), e.d2.dot(e.d1), e.d2.dot(e.d2);
  k.curvature << e.d11.dot(k.n), e.d12.dot(k.n), e.d12.dot(k.n), e.d22.dot(k.n);
  return k;
}

inline SurfaceKinematics surface_kinematics(const NurbsSurface& s, const Vec2& xi) {
  return surface_kinematics(eval_surface(s, xi, 2));
}

// ---------------------------------------------------------------------------
// Face extraction

/// Volume face as a surface plus the flat volume control-point index of each
/// surface control point. Parameter order is chosen so that tau1 x tau2
/// points outward for a right-handed (detJ > 0) volume.
struct FaceSurface {
  NurbsSurface s;
  std::vector<int> vol_indices;
  Face face;
};

inline FaceSurface extract_face_surface(const NurbsVolume& v, Face f) {
  const int axis = face_axis(f);
  const bool maxf = face_is_max(f);
  // remaining axes in cyclic order (a, b) with (a, b, axis) even
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  const int ax1 = maxf ? a : b;  // min faces swap to keep normal outward
  const int ax2 = maxf ? b : a;

  const std::array<int, 3> n = {v.n1, v.n2, v.n3};
  FaceSurface out;
  out.face = f;
  out.s.kv = {v.kv[static_cast<size_t>(ax1)], v.kv[static_cast<size_t>(ax2)]};
  out.s.n1 = n[static_cast<size_t>(ax1)];
  out.s.n2 = n[static_cast<size_t>(ax2)];
  out.s.ctrl.resize(static_cast<size_t>(out.s.n1 * out.s.n2));
  out.vol_indices.resize(out.s.ctrl.size());
  const int fixed = maxf ? n[static_cast<size_t>(axis)] - 1 : 0;
  std::array<int, 3> idx{};
  idx[static_cast<size_t>(axis)] = fixed;
  for (int jj = 0; jj < out.s.n2; ++jj)
    for (int ii = 0; ii < out.s.n1; ++ii) {
      idx[static_cast<size_t>(ax1)] = ii;
      idx[static_cast<size_t>(ax2)] = jj;
      const int vi = v.index(idx[0], idx[1], idx[2]);
      out.s.ctrl[static_cast<size_t>(ii + out.s.n1 * jj)] = v.ctrl[static_cast<size_t>(vi)];
      out.vol_indices[static_cast<size_t>(ii + out.s.n1 * jj)] = vi;
    }
  out.s.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Refinement (tensor application of the curve operations)

namespace detail {

template <class Op>
NurbsVolume apply_curve_op_volume(const NurbsVolume& v, int dir, Op&& op) {
  const std::array<int, 3> n = {v.n1, v.n2, v.n3};
  const int na = n[static_cast<size_t>(dir)];
  const int o1 = (dir + 1) % 3, o2 = (dir + 2) % 3;

  NurbsVolume out;
  out.kv = v.kv;
  bool first = true;
  std::array<int, 3> nn = n;
  for (int j = 0; j < n[static_cast<size_t>(o1)]; ++j)
    for (int k = 0; k < n[static_cast<size_t>(o2)]; ++k) {
      HomogeneousCurve row;
      row.kv = v.kv[static_cast<size_t>(dir)];
      row.ctrl.resize(static_cast<size_t>(na));
      std::array<int, 3> idx{};
      idx[static_cast<size_t>(o1)] = j;
      idx[static_cast<size_t>(o2)] = k;
      for (int i = 0; i < na; ++i) {
        idx[static_cast<size_t>(dir)] = i;
        row.ctrl[static_cast<size_t>(i)] = v.at(idx[0], idx[1], idx[2]);
      }
      HomogeneousCurve res = op(row);
      if (first) {
        nn[static_cast<size_t>(dir)] = static_cast<int>(res.ctrl.size());
        out.kv[static_cast<size_t>(dir)] = res.kv;
        out.n1 = nn[0];
        out.n2 = nn[1];
        out.n3 = nn[2];
        out.ctrl.assign(static_cast<size_t>(out.n1) * out.n2 * out.n3, Vec4::Zero());
        first = false;
      }
      for (int i = 0; i < nn[static_cast<size_t>(dir)]; ++i) {
        idx[static_cast<size_t>(dir)] = i;
        out.at(idx[0], idx[1], idx[2]) = res.ctrl[static_cast<size_t>(i)];
      }
    }
  out.validate();
  return out;
}

template <class Op>
NurbsSurface apply_curve_op_surface(const NurbsSurface& s, int dir, Op&& op) {
  const std::array<int, 2> n = {s.n1, s.n2};
  const int na = n[static_cast<size_t>(dir)];
  const int other = 1 - dir;

  NurbsSurface out;
  out.kv = s.kv;
  bool first = true;
  std::array<int, 2> nn = n;
  for (int j = 0; j < n[static_cast<size_t>(other)]; ++j) {
    HomogeneousCurve row;
    row.kv = s.kv[static_cast<size_t>(dir)];
    row.ctrl.resize(static_cast<size_t>(na));
    std::array<int, 2> idx{};
    idx[static_cast<size_t>(other)] = j;
    for (int i = 0; i < na; ++i) {
      idx[static_cast<size_t>(dir)] = i;
      row.ctrl[static_cast<size_t>(i)] = s.at(idx[0], idx[1]);
    }
    HomogeneousCurve res = op(row);
    if (first) {
      nn[static_cast<size_t>(dir)] = static_cast<int>(res.ctrl.size());
      out.kv[static_cast<size_t>(dir)] = res.kv;
      out.n1 = nn[0];
      out.n2 = nn[1];
      out.ctrl.assign(static_cast<size_t>(out.n1) * out.n2, Vec4::Zero());
      first = false;
    }
    for (int i = 0; i < nn[static_cast<size_t>(dir)]; ++i) {
      idx[static_cast<size_t>(dir)] = i;
      out.at(idx[0], idx[1]) = res.ctrl[static_cast<size_t>(i)];
    }
  }
  out.validate();
  return out;
}

}  // namespace detail

/// Knot insertion along one direction; values may repeat for multiplicity.
inline NurbsVolume insert_knots(const NurbsVolume& v, int dir,
                                const std::vector<double>& values) {
  if (values.empty()) return v;
  return detail::apply_curve_op_volume(v, dir, [&](const HomogeneousCurve& c) {
    HomogeneousCurve r = c;
    for (double u : values) r = insert_knot(r, u);
    return r;
  });
}

/// h-refinement: insert the given knots in each direction. Geometry is
/// preserved exactly.
inline NurbsVolume refine_h(const NurbsVolume& v,
                            const std::array<std::vector<double>, 3>& new_knots) {
  NurbsVolume out = v;
  for (int d = 0; d < 3; ++d) out = insert_knots(out, d, new_knots[static_cast<size_t>(d)]);
  return out;
}

/// Order elevation along selected directions.
inline NurbsVolume refine_p(const NurbsVolume& v, const std::array<int, 3>& steps) {
  NurbsVolume out = v;
  for (int d = 0; d < 3; ++d)
    if (steps[static_cast<size_t>(d)] > 0)
      out = detail::apply_curve_op_volume(out, d, [&](const HomogeneousCurve& c) {
        return elevate_degree(c, steps[static_cast<size_t>(d)]);
      });
  return out;
}

inline NurbsSurface elevate_surface(const NurbsSurface& s, const std::array<int, 2>& steps) {
  NurbsSurface out = s;
  for (int d = 0; d < 2; ++d)
    if (steps[static_cast<size_t>(d)] > 0)
      out = detail::apply_curve_op_surface(out, d, [&](const HomogeneousCurve& c) {
        return elevate_degree(c, steps[static_cast<size_t>(d)]);
      });
  return out;
}

// ---------------------------------------------------------------------------
// Axis permutation / canonical orientation

/// Relabels parametric axes: new axis d is old axis perm[d].
inline NurbsVolume permute_axes(const NurbsVolume& v, const std::array<int, 3>& perm) {
  NurbsVolume out;
  const std::array<int, 3> n = {v.n1, v.n2, v.n3};
  out.kv = {v.kv[static_cast<size_t>(perm[0])], v.kv[static_cast<size_t>(perm[1])],
            v.kv[static_cast<size_t>(perm[2])]};
  out.n1 = n[static_cast<size_t>(perm[0])];
  out.n2 = n[static_cast<size_t>(perm[1])];
  out.n3 = n[static_cast<size_t>(perm[2])];
  out.ctrl.resize(v.ctrl.size());
  for (int k = 0; k < out.n3; ++k)
    for (int j = 0; j < out.n2; ++j)
      for (int i = 0; i < out.n1; ++i) {
        std::array<int, 3> old{};
        old[static_cast<size_t>(perm[0])] = i;
        old[static_cast<size_t>(perm[1])] = j;
        old[static_cast<size_t>(perm[2])] = k;
        out.at(i, j, k) = v.at(old[0], old[1], old[2]);
      }
  out.validate();
  return out;
}

/// Reverses the parametrization of one axis (xi -> a+b-xi).
inline NurbsVolume reverse_axis(const NurbsVolume& v, int dir) {
  NurbsVolume out = v;
  const auto& kv = v.kv[static_cast<size_t>(dir)];
  const double a = kv.front(), b = kv.back();
  std::vector<double> nk(kv.knots().size());
  for (size_t i = 0; i < nk.size(); ++i)
    nk[i] = a + b - kv.knots()[nk.size() - 1 - i];
  out.kv[static_cast<size_t>(dir)] = KnotVector(std::move(nk), kv.degree());
  const std::array<int, 3> n = {v.n1, v.n2, v.n3};
  for (int k = 0; k < v.n3; ++k)
    for (int j = 0; j < v.n2; ++j)
      for (int i = 0; i < v.n1; ++i) {
        std::array<int, 3> idx = {i, j, k};
        idx[static_cast<size_t>(dir)] =
            n[static_cast<size_t>(dir)] - 1 - idx[static_cast<size_t>(dir)];
        out.at(i, j, k) = v.at(idx[0], idx[1], idx[2]);
      }
  return out;
}

inline double probe_jacobian_sign(const NurbsVolume& v) {
  std::mt19937 rng(1234);
  double best = 0.0;
  for (int t = 0; t < 16; ++t) {
    Vec3 xi;
    for (int d = 0; d < 3; ++d) {
      std::uniform_real_distribution<double> dist(v.kv[static_cast<size_t>(d)].front(),
                                                  v.kv[static_cast<size_t>(d)].back());
      xi(d) = dist(rng);
    }
    const double dj = eval_volume(v, xi).detJ;
    if (std::abs(dj) > std::abs(best)) best = dj;
  }
  return best;
}

/// Reorients a volume so the given face becomes Xi3Max and detJ > 0. The
/// geometry (as a point set) is unchanged; parametrization is relabeled.
inline NurbsVolume canonicalize_for_face(const NurbsVolume& v, Face f) {
  NurbsVolume out = v;
  switch (face_axis(f)) {
    case 0: out = permute_axes(out, {1, 2, 0}); break;
    case 1: out = permute_axes(out, {2, 0, 1}); break;
    default: break;
  }
  if (!face_is_max(f)) out = reverse_axis(out, 2);
  if (probe_jacobian_sign(out) < 0.0) out = permute_axes(out, {1, 0, 2});
  if (probe_jacobian_sign(out) <= 0.0)
    throw ConstructionError("could not orient volume with positive Jacobian");
  return out;
}

}  // namespace voiga
